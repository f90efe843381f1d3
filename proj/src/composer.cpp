#include "dpmlc/composer.hpp"

#include "dpmlc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace dpmlc {

namespace {

double fold_latency(const ScheduleExpr& e, int node,
                    const std::map<std::string, PerfDecl>& declared) {
    const auto& n = e.nodes[static_cast<std::size_t>(node)];
    if (n.op == ScheduleOp::leaf) {
        const auto it = declared.find(n.model);
        if (it == declared.end())
            throw std::invalid_argument("propagate: no declared perf for model '" + n.model + "'");
        return it->second.latency_ns;
    }
    const double l = fold_latency(e, n.left, declared);
    const double r = fold_latency(e, n.right, declared);
    return n.op == ScheduleOp::seq ? l + r : std::max(l, r);
}

}  // namespace

PropagationResult propagate_constraints(const ScheduleExpr& schedule,
                                        const std::map<std::string, PerfDecl>& declared) {
    PropagationResult out;
    const auto names = schedule.leaf_names();
    if (names.empty()) throw std::invalid_argument("propagate: empty schedule");

    // the schedule tree is one connected dataflow component, so every model's
    // chain minimum is the global minimum over the tree
    double chain_min = std::numeric_limits<double>::infinity();
    for (const auto& name : names) {
        const auto it = declared.find(name);
        if (it == declared.end())
            throw std::invalid_argument("propagate: no declared perf for model '" + name + "'");
        chain_min = std::min(chain_min, it->second.throughput_gpps);
    }

    for (const auto& name : names) {
        EffectivePerf eff;
        eff.throughput_gpps = chain_min;
        eff.slowed = declared.at(name).throughput_gpps > chain_min;
        if (eff.slowed)
            out.flags.push_back("model '" + name + "' slowed from " +
                                std::to_string(declared.at(name).throughput_gpps) + " to " +
                                std::to_string(chain_min) + " Gpkt/s by the chain");
        out.per_model.emplace(name, eff);
    }
    out.pipeline_throughput_gpps = chain_min;
    out.pipeline_latency_ns = fold_latency(schedule, schedule.root, declared);
    return out;
}

ResourceReport aggregate_resources(const std::vector<ResourceReport>& parts,
                                   const TargetDesc& target) {
    ResourceReport total;
    total.kind = target.kind;
    if (parts.empty()) return total;

    for (const auto& p : parts)
        if (p.kind != target.kind)
            throw std::invalid_argument("aggregate_resources: mixed target kinds");

    if (target.kind == TargetKind::mat) {
        for (const auto& p : parts) total.mats += p.mats;
        return total;
    }

    // CU demand of a multiplexed part is its reported (capped) count times m
    long demand = 0;
    for (const auto& p : parts) {
        demand += p.cus * p.time_multiplex;
        total.mus += p.mus;
    }
    const long capacity = target.cgra.cu_capacity();
    if (demand > capacity) {
        total.time_multiplex = static_cast<int>((demand + capacity - 1) / capacity);
        total.cus = capacity;
    } else {
        total.cus = demand;
    }
    return total;
}

ComposedPipeline compose(const ScheduleExpr& schedule, const std::vector<ModelSummary>& parts,
                         const PlatformSpec& platform) {
    ComposedPipeline c;
    c.schedule = schedule;
    c.parts = parts;

    std::map<std::string, PerfDecl> declared;
    std::vector<ResourceReport> reports;
    for (const auto& p : parts) {
        declared[p.name] = {p.perf.throughput_gpps, p.perf.latency_ns};
        reports.push_back(p.resources);
    }
    c.propagation = propagate_constraints(schedule, declared);
    c.aggregate = aggregate_resources(reports, platform_to_target(platform));
    c.pipeline_perf.throughput_gpps = c.propagation.pipeline_throughput_gpps;
    c.pipeline_perf.latency_ns = c.propagation.pipeline_latency_ns;
    c.verdict = check_cross_model_consistency(c, platform);
    return c;
}

FeasibilityVerdict check_cross_model_consistency(const ComposedPipeline& composed,
                                                 const PlatformSpec& platform) {
    const TargetDesc target = platform_to_target(platform);
    // the aggregate perf is the propagated pipeline perf; each model's
    // effective throughput already equals the chain minimum, so one check
    // covers them all
    FeasibilityVerdict v =
        check_feasibility(composed.aggregate, composed.pipeline_perf, target, platform);
    return v;
}

std::optional<FusionPlan> plan_fusion(const ModelSpec& a, const Dataset& data_a,
                                      const ModelSpec& b, const Dataset& data_b,
                                      double threshold) {
    const auto algs_a = effective_algorithms(a);
    const auto algs_b = effective_algorithms(b);
    const bool dnn_f1 = a.optimization_metric == Metric::f1 &&
                        b.optimization_metric == Metric::f1 &&
                        std::count(algs_a.begin(), algs_a.end(), Algorithm::dnn) &&
                        std::count(algs_b.begin(), algs_b.end(), Algorithm::dnn);
    if (!dnn_f1) return std::nullopt;

    const double overlap = feature_overlap(data_a, data_b);
    if (overlap < threshold) return std::nullopt;

    FusionPlan plan;
    plan.model_a = a.name;
    plan.model_b = b.name;
    plan.overlap = overlap;
    std::set<std::string> union_set(data_a.feature_names.begin(), data_a.feature_names.end());
    union_set.insert(data_b.feature_names.begin(), data_b.feature_names.end());
    plan.fused_features.assign(union_set.begin(), union_set.end());
    return plan;
}

namespace {

std::vector<int> feature_positions(const std::vector<std::string>& task_features,
                                   const std::vector<std::string>& fused) {
    std::vector<int> pos;
    pos.reserve(task_features.size());
    for (const auto& f : task_features) {
        const auto it = std::find(fused.begin(), fused.end(), f);
        if (it == fused.end()) throw std::logic_error("fusion: feature missing from union");
        pos.push_back(static_cast<int>(it - fused.begin()));
    }
    return pos;
}

std::vector<double> lift_row(std::span<const double> row, const std::vector<int>& positions,
                             int union_width) {
    std::vector<double> lifted(static_cast<std::size_t>(union_width), 0.0);
    for (std::size_t i = 0; i < positions.size(); ++i)
        lifted[static_cast<std::size_t>(positions[i])] = row[i];
    return lifted;
}

}  // namespace

FusedTrainResult train_fused(const FusionPlan& plan, const Dataset& data_a, const Dataset& data_b,
                             const MlpConfig& cfg) {
    const int union_d = static_cast<int>(plan.fused_features.size());
    const int out_a = data_a.num_classes;
    const int out_b = data_b.num_classes;

    FusedTrainResult result;
    result.model.a_positions = feature_positions(data_a.feature_names, plan.fused_features);
    result.model.b_positions = feature_positions(data_b.feature_names, plan.fused_features);

    // trunk + head A stored as a plain MLP; head B carried separately
    {
        MlpConfig init_cfg = cfg;
        Dataset stub;  // only widths matter for initialization
        stub.feature_names.assign(static_cast<std::size_t>(union_d), "");
        stub.num_classes = out_a;
        stub.labels = {0, 1};
        stub.features.assign(static_cast<std::size_t>(2 * union_d), 0.0);
        stub.split.train_rows = {0, 1};
        init_cfg.epochs = 0;
        result.model.trunk_and_head_a = train_mlp(init_cfg, stub);
    }
    MlpModel& net = result.model.trunk_and_head_a;
    {
        Rng head_rng(cfg.seed ^ 0x68656164u);
        const int fan_in = net.weights.back().cols;
        result.model.head_b_weights = Mat(out_b, fan_in);
        const double bound = std::sqrt(6.0 / (fan_in + out_b));
        for (auto& v : result.model.head_b_weights.a) v = head_rng.uniform(-bound, bound);
        result.model.head_b_biases.assign(static_cast<std::size_t>(out_b), 0.0);
    }

    // interleave batches: task A, then task B, per round; each batch updates
    // the trunk and its own head only
    Rng rng(cfg.seed);
    std::vector<int> order_a = data_a.split.train_rows;
    std::vector<int> order_b = data_b.split.train_rows;
    const auto batches = [&](std::size_t n) {
        return (n + static_cast<std::size_t>(cfg.batch_size) - 1) /
               static_cast<std::size_t>(cfg.batch_size);
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order_a);
        rng.shuffle(order_b);
        const std::size_t rounds = std::max(batches(order_a.size()), batches(order_b.size()));
        for (std::size_t round = 0; round < rounds; ++round) {
            for (int task = 0; task < 2; ++task) {
                const bool is_a = task == 0;
                const Dataset& data = is_a ? data_a : data_b;
                const auto& order = is_a ? order_a : order_b;
                const auto& positions = is_a ? result.model.a_positions : result.model.b_positions;
                const std::size_t start = round * static_cast<std::size_t>(cfg.batch_size);
                if (start >= order.size()) continue;
                const std::size_t stop =
                    std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));

                std::vector<std::vector<double>> rows;
                std::vector<int> labels;
                for (std::size_t i = start; i < stop; ++i) {
                    rows.push_back(lift_row(data.row(order[i]), positions, union_d));
                    labels.push_back(data.labels[static_cast<std::size_t>(order[i])]);
                }

                // head B temporarily takes the output slot so the shared
                // backprop path updates trunk + the right head
                if (!is_a) {
                    std::swap(net.weights.back(), result.model.head_b_weights);
                    std::swap(net.biases.back(), result.model.head_b_biases);
                    net.output_width = out_b;
                }
                const MlpGradients g = mlp_backprop(net, rows, labels);
                if (std::isfinite(g.loss)) {
                    for (std::size_t l = 0; l < net.weights.size(); ++l) {
                        for (std::size_t i = 0; i < net.weights[l].a.size(); ++i)
                            net.weights[l].a[i] -= cfg.learning_rate * g.weight_grads[l].a[i];
                        for (std::size_t i = 0; i < net.biases[l].size(); ++i)
                            net.biases[l][i] -= cfg.learning_rate * g.bias_grads[l][i];
                    }
                } else {
                    net.diverged = true;
                }
                if (!is_a) {
                    std::swap(net.weights.back(), result.model.head_b_weights);
                    std::swap(net.biases.back(), result.model.head_b_biases);
                    net.output_width = out_a;
                }
            }
        }
    }

    // per-task test F1
    auto evaluate = [&](const Dataset& data, bool task_a) {
        std::vector<int> preds, labels;
        for (int r : data.split.test_rows) {
            preds.push_back(predict_fused(result.model, data.row(r), task_a));
            labels.push_back(data.labels[static_cast<std::size_t>(r)]);
        }
        return data.num_classes == 2 ? f1_score(preds, labels)
                                     : macro_f1(preds, labels, data.num_classes);
    };
    result.f1_a = evaluate(data_a, true);
    result.f1_b = evaluate(data_b, false);

    result.topology.push_back(union_d);
    for (std::size_t l = 0; l + 1 < net.weights.size(); ++l)
        result.topology.push_back(net.weights[l].rows);
    result.topology.push_back(out_a + out_b);
    return result;
}

int predict_fused(const FusedMlpModel& model, std::span<const double> row, bool task_a) {
    const auto& positions = task_a ? model.a_positions : model.b_positions;
    const auto lifted = lift_row(row, positions, model.union_width());

    if (task_a) return predict_mlp(model.trunk_and_head_a, lifted);

    // run the trunk, then head B
    MlpModel trunk = model.trunk_and_head_a;
    trunk.weights.back() = model.head_b_weights;
    trunk.biases.back() = model.head_b_biases;
    trunk.output_width = static_cast<int>(model.head_b_biases.size());
    return predict_mlp(trunk, lifted);
}

long param_count(const FusedMlpModel& model) {
    return param_count(model.trunk_and_head_a) +
           static_cast<long>(model.head_b_weights.a.size()) +
           static_cast<long>(model.head_b_biases.size());
}

}  // namespace dpmlc
