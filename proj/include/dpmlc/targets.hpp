#pragma once

#include "dpmlc/dataset.hpp"
#include "dpmlc/spec.hpp"
#include "dpmlc/svm.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dpmlc {

/// Map-reduce grid target: separate CU and MU grids, SIMD lanes per CU, and
/// word capacity per MU. The cost constants are artifact defaults and are
/// configurable per target descriptor.
struct CgraTarget {
    int cu_rows = 16, cu_cols = 16;
    int mu_rows = 16, mu_cols = 16;
    int lanes_per_cu = 16;
    int words_per_mu = 64;
    double clock_ghz = 1.0;

    long cu_capacity() const { return static_cast<long>(cu_rows) * cu_cols; }
    long mu_capacity() const { return static_cast<long>(mu_rows) * mu_cols; }
};

struct MatTarget {
    int num_mats = 1;
    double line_rate_gpps = 1.0;
};

enum class TargetKind { cgra, mat };

struct TargetDesc {
    TargetKind kind = TargetKind::cgra;
    CgraTarget cgra;
    MatTarget mat;
};

TargetDesc platform_to_target(const PlatformSpec& platform);
TargetDesc parse_target_descriptor(const std::string& text);

struct ResourceReport {
    TargetKind kind = TargetKind::cgra;
    long cus = 0;
    long mus = 0;
    long mats = 0;
    int time_multiplex = 1;  // m >= 1; reported CUs are capped at capacity when m > 1
};

struct PerfReport {
    double throughput_gpps = 0.0;
    double latency_ns = 0.0;
};

struct FeasibilityVerdict {
    bool feasible = false;
    std::vector<std::pair<std::string, double>> slacks;  // name -> slack; feasible iff all >= 0

    double slack(const std::string& name) const;
};

/// Analytic cost of an MLP on the grid. Per layer l with n_in -> n_out:
///   chunks = ceil(n_in / lanes), CUs = n_out * chunks,
///   weight MUs = ceil(n_in*n_out / words_per_mu), plus 2 double-buffer MUs.
/// When total CUs exceed capacity the grid is time-multiplexed by
/// m = ceil(total/capacity): reported CUs cap at capacity, throughput drops to
/// clock/m, and latency multiplies by m. MUs are never multiplexed.
/// Per-layer latency is (chunks + ceil(log2(min(n_in, lanes))) + 2) cycles.
std::pair<ResourceReport, PerfReport> estimate_cgra_mlp(const std::vector<int>& topology,
                                                        const CgraTarget& target);

/// One MAT per cluster.
ResourceReport estimate_mat_kmeans(int k, const MatTarget& target);

/// One MAT per (kept) feature.
ResourceReport estimate_mat_svm(int num_features, const MatTarget& target);

/// MAT pipelines run at line rate; latency is one cycle per table at 1 GHz.
PerfReport mat_perf(const ResourceReport& res, const MatTarget& target);

/// Slack per resource pool plus throughput and latency slacks against the
/// platform constraints. Throws std::invalid_argument when the report and
/// platform kinds disagree.
FeasibilityVerdict check_feasibility(const ResourceReport& res, const PerfReport& perf,
                                     const TargetDesc& target, const PlatformSpec& constraints);

struct FeatureDropFit {
    SvmModel model;
    std::vector<int> kept;  // surviving feature indices into the original dataset
};

/// Train an SVM, and while the per-feature MAT estimate exceeds the budget,
/// drop the feature with the smallest scale-adjusted |w_i| and retrain.
/// Throws std::runtime_error when even a single feature does not fit.
FeatureDropFit fit_svm_by_feature_dropping(const Dataset& data, const SvmConfig& cfg,
                                           const MatTarget& target);

}  // namespace dpmlc
