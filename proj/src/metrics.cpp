#include "dpmlc/metrics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace dpmlc {

std::string to_string(MetricKind k) { return k == MetricKind::f1 ? "f1" : "v_measure"; }

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

double f1_from_counts(long tp, long fp, long fn) {
    const long denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

MetricReport f1_score(const std::vector<int>& predictions, const std::vector<int>& labels) {
    check_lengths(predictions.size(), labels.size(), "f1_score");
    MetricReport r;
    r.kind = MetricKind::f1;
    r.table_rows = 2;
    r.table_cols = 2;
    r.table.assign(4, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] > 1 || predictions[i] < 0 || predictions[i] > 1)
            throw std::invalid_argument("f1_score: labels and predictions must be binary");
        ++r.table[static_cast<std::size_t>(labels[i]) * 2 + predictions[i]];
    }
    const long tp = r.at(1, 1), fp = r.at(0, 1), fn = r.at(1, 0);
    r.value = f1_from_counts(tp, fp, fn);
    return r;
}

MetricReport macro_f1(const std::vector<int>& predictions, const std::vector<int>& labels,
                      int num_classes) {
    check_lengths(predictions.size(), labels.size(), "macro_f1");
    MetricReport r;
    r.kind = MetricKind::f1;
    r.table_rows = num_classes;
    r.table_cols = num_classes;
    r.table.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
        ++r.table[static_cast<std::size_t>(labels[i]) * num_classes + predictions[i]];

    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < num_classes; ++c) {
        long tp = r.at(c, c), fp = 0, fn = 0, support = 0;
        for (int o = 0; o < num_classes; ++o) {
            support += r.at(c, o);
            if (o != c) {
                fn += r.at(c, o);
                fp += r.at(o, c);
            }
        }
        if (support == 0) continue;  // class absent from the labels
        sum += f1_from_counts(tp, fp, fn);
        ++present;
    }
    r.value = present == 0 ? 0.0 : sum / present;
    return r;
}

MetricReport v_measure(const std::vector<int>& cluster_assignments,
                       const std::vector<int>& labels) {
    check_lengths(cluster_assignments.size(), labels.size(), "v_measure");
    const auto n = static_cast<double>(labels.size());

    // compact ids so arbitrary cluster/label values are accepted
    std::map<int, int> cid, lid;
    for (int c : cluster_assignments) cid.emplace(c, static_cast<int>(cid.size()));
    for (int l : labels) lid.emplace(l, static_cast<int>(lid.size()));
    const int K = static_cast<int>(cid.size());
    const int C = static_cast<int>(lid.size());

    MetricReport r;
    r.kind = MetricKind::v_measure;
    r.table_rows = K;
    r.table_cols = C;
    r.table.assign(static_cast<std::size_t>(K) * C, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
        ++r.table[static_cast<std::size_t>(cid[cluster_assignments[i]]) * C + lid[labels[i]]];

    std::vector<long> nk(static_cast<std::size_t>(K), 0), nc(static_cast<std::size_t>(C), 0);
    for (int k = 0; k < K; ++k)
        for (int c = 0; c < C; ++c) {
            nk[static_cast<std::size_t>(k)] += r.at(k, c);
            nc[static_cast<std::size_t>(c)] += r.at(k, c);
        }

    auto entropy = [&](const std::vector<long>& counts) {
        double h = 0.0;
        for (long m : counts)
            if (m > 0) {
                const double p = static_cast<double>(m) / n;
                h -= p * std::log(p);
            }
        return h;
    };
    const double h_c = entropy(nc);
    const double h_k = entropy(nk);

    double h_c_given_k = 0.0, h_k_given_c = 0.0;
    for (int k = 0; k < K; ++k)
        for (int c = 0; c < C; ++c) {
            const long m = r.at(k, c);
            if (m == 0) continue;
            const double p = static_cast<double>(m) / n;
            h_c_given_k -= p * std::log(static_cast<double>(m) / nk[static_cast<std::size_t>(k)]);
            h_k_given_c -= p * std::log(static_cast<double>(m) / nc[static_cast<std::size_t>(c)]);
        }

    const double homogeneity = h_c > 0.0 ? 1.0 - h_c_given_k / h_c : 1.0;
    const double completeness = h_k > 0.0 ? 1.0 - h_k_given_c / h_k : 1.0;
    r.value = (homogeneity + completeness) > 0.0
                  ? 2.0 * homogeneity * completeness / (homogeneity + completeness)
                  : 0.0;
    return r;
}

}  // namespace dpmlc
