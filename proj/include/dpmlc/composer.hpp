#pragma once

#include "dpmlc/dataset.hpp"
#include "dpmlc/metrics.hpp"
#include "dpmlc/mlp.hpp"
#include "dpmlc/spec.hpp"
#include "dpmlc/targets.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dpmlc {

struct PerfDecl {
    double throughput_gpps = 0.0;
    double latency_ns = 0.0;
};

struct EffectivePerf {
    double throughput_gpps = 0.0;  // chain minimum
    bool slowed = false;           // effective < declared: the model is dragged down
};

struct PropagationResult {
    std::map<std::string, EffectivePerf> per_model;
    double pipeline_throughput_gpps = 0.0;  // min over the schedule
    double pipeline_latency_ns = 0.0;       // Seq adds, Par takes the max
    std::vector<std::string> flags;         // models slowed below their declared rate
};

/// Every model connected through the schedule shares one packet stream, so
/// the effective throughput of each is the minimum declared throughput along
/// its chain. Latency contributions add across Seq and max across Par.
PropagationResult propagate_constraints(const ScheduleExpr& schedule,
                                        const std::map<std::string, PerfDecl>& declared);

/// Element-wise sum with zero glue overhead; the time-multiplex factor is
/// recomputed from the summed CU demand against capacity. Parts must share
/// one target kind.
ResourceReport aggregate_resources(const std::vector<ResourceReport>& parts,
                                   const TargetDesc& target);

struct ModelSummary {
    std::string name;
    ResourceReport resources;
    PerfReport perf;
    double objective = 0.0;
    MetricKind metric = MetricKind::f1;
};

struct ComposedPipeline {
    ScheduleExpr schedule;
    std::vector<ModelSummary> parts;
    ResourceReport aggregate;
    PerfReport pipeline_perf;
    PropagationResult propagation;
    FeasibilityVerdict verdict;
};

/// Propagates, aggregates, and checks the composition against the platform.
ComposedPipeline compose(const ScheduleExpr& schedule, const std::vector<ModelSummary>& parts,
                         const PlatformSpec& platform);

/// Infeasible iff any effective constraint violates the platform floor or
/// ceiling, or the aggregate resources exceed capacity.
FeasibilityVerdict check_cross_model_consistency(const ComposedPipeline& composed,
                                                 const PlatformSpec& platform);

struct FusionPlan {
    std::string model_a, model_b;
    double overlap = 0.0;                     // Jaccard similarity of the feature sets
    std::vector<std::string> fused_features;  // sorted union
};

inline constexpr double kFusionThreshold = 0.5;

/// A plan exists iff both models are dnn/f1 tasks and the feature overlap
/// reaches the threshold.
std::optional<FusionPlan> plan_fusion(const ModelSpec& a, const Dataset& data_a,
                                      const ModelSpec& b, const Dataset& data_b,
                                      double threshold = kFusionThreshold);

/// Shared trunk over the union feature space with one output head per task.
struct FusedMlpModel {
    MlpModel trunk_and_head_a;  // trunk layers + head A as the final layer
    Mat head_b_weights;
    std::vector<double> head_b_biases;
    std::vector<int> a_positions;  // task feature index -> union index
    std::vector<int> b_positions;

    int union_width() const { return trunk_and_head_a.input_width; }
};

struct FusedTrainResult {
    FusedMlpModel model;
    MetricReport f1_a;
    MetricReport f1_b;
    std::vector<int> topology;  // [union_d, hidden..., out_a + out_b]
};

/// Interleaved training: batches alternate between the tasks, each updating
/// the shared trunk and its own head only. Absent features are zero-filled.
/// Per-task F1 is reported on each task's test split.
FusedTrainResult train_fused(const FusionPlan& plan, const Dataset& data_a, const Dataset& data_b,
                             const MlpConfig& cfg);

int predict_fused(const FusedMlpModel& model, std::span<const double> row, bool task_a);

long param_count(const FusedMlpModel& model);

}  // namespace dpmlc
