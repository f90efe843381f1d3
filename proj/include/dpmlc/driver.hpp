#pragma once

#include "dpmlc/bundle.hpp"
#include "dpmlc/design_space.hpp"
#include "dpmlc/model_io.hpp"
#include "dpmlc/optimizer.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpmlc {

/// Drop every candidate whose minimal-resource configuration already violates
/// the platform resources, throughput floor, or latency ceiling. An empty
/// result means no feasible algorithm exists for the platform.
std::vector<Algorithm> prune_algorithms(const std::vector<Algorithm>& candidates,
                                        const PlatformSpec& platform);

/// Command-line overrides shadowing spec fields; recorded in the manifest.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> budget;
    std::optional<int> doe;
};

struct CommandResult {
    int exit_code = 0;  // 0 ok, 1 no feasible result, 2 usage/spec error
    std::string message;
};

/// Everything the evaluator needs to score one configuration.
struct EvalContext {
    Algorithm algorithm = Algorithm::dnn;
    const DesignSpace* space = nullptr;
    const Dataset* data = nullptr;
    PlatformSpec platform;
    TargetDesc target;
    std::uint64_t train_seed = 0;
};

/// Train the configured model, measure the objective on the test split, and
/// attach the cost-model reports and constraint slacks.
Observation evaluate_configuration(const EvalContext& ctx, const Configuration& cfg);

struct FinalizedModel {
    TrainedModel model;
    std::vector<int> kept_features;  // svm only
    GeneratedArtifact artifact;
    MetricKind metric = MetricKind::f1;
    double objective = 0.0;
    bool feasible = false;
    std::vector<std::pair<std::string, double>> slacks;
};

/// Deterministically retrain the winning configuration and emit its backend
/// program.
FinalizedModel finalize_configuration(const EvalContext& ctx, const Configuration& cfg);

inline constexpr int kMlpSearchEpochs = 20;

/// compile: prune -> per-model search -> retrain best -> codegen -> compose.
/// Writes one bundle directory per model plus report.json and manifest.json
/// at the root. Exit 0 iff every model found a feasible configuration and the
/// composition is feasible.
CommandResult cmd_compile(const std::string& spec_path, const std::string& out_dir,
                          const Overrides& overrides, std::ostream& log);

/// search: as compile but stopping after the search; writes regret.csv and
/// best.json per model.
CommandResult cmd_search(const std::string& spec_path, const std::string& out_dir,
                         const Overrides& overrides, std::ostream& log);

struct EstimateRequest {
    std::optional<int> kmeans_k;
    std::optional<int> svm_features;
    std::optional<std::vector<int>> mlp_topology;
};

/// estimate: analytic reports for a model shape on a target, no training.
CommandResult cmd_estimate(const std::string& target_path, const EstimateRequest& request,
                           std::ostream& out);

/// report: human-readable bundle summary with integrity verification.
CommandResult cmd_report(const std::string& bundle_dir, std::ostream& out);

}  // namespace dpmlc
