#pragma once

#include <string>
#include <vector>

namespace dpmlc {

enum class MetricKind { f1, v_measure };

/// Metric value plus the counts it was computed from: a 2x2 confusion matrix
/// for binary F1, a classes x predictions matrix for macro F1, and the
/// cluster x class contingency table for V-measure. The value is always
/// recomputable from the stored table.
struct MetricReport {
    MetricKind kind = MetricKind::f1;
    double value = 0.0;
    int table_rows = 0;  // actual classes (f1) or clusters (v_measure)
    int table_cols = 0;  // predicted classes (f1) or actual classes (v_measure)
    std::vector<long> table;  // row-major counts

    long at(int r, int c) const { return table[static_cast<std::size_t>(r) * table_cols + c]; }
};

/// Binary F1 = 2TP / (2TP + FP + FN), 0 when the denominator is 0.
/// Labels and predictions must be in {0, 1}; class 1 is positive.
MetricReport f1_score(const std::vector<int>& predictions, const std::vector<int>& labels);

/// Unweighted mean of the one-vs-rest F1 over classes present in the labels.
MetricReport macro_f1(const std::vector<int>& predictions, const std::vector<int>& labels,
                      int num_classes);

/// Harmonic mean of homogeneity and completeness computed from conditional
/// entropies of the contingency table. 1 iff clusters and classes are in
/// bijection on the sample; invariant under relabeling of cluster ids.
MetricReport v_measure(const std::vector<int>& cluster_assignments, const std::vector<int>& labels);

std::string to_string(MetricKind k);

}  // namespace dpmlc
