#pragma once

#include "dpmlc/forest.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dpmlc {

struct TracePoint {
    int iteration = 0;  // 1-based
    std::optional<double> objective;
    bool feasible = false;
    std::optional<double> best_so_far;  // best feasible objective so far
    ResourceReport resources;
    PerfReport perf;
    bool has_reports = false;
};

struct SearchResult {
    std::optional<Observation> best;  // best feasible observation, if any
    std::vector<TracePoint> trace;
    std::vector<Observation> history;
};

using Evaluator = std::function<Observation(const Configuration&)>;

inline constexpr int kAcquisitionPool = 1000;

/// Acquisition argmax over a pool of uniform candidates:
/// A(x) = EI(x) * p_feasible(x), falling back to plain EI when every
/// candidate is predicted infeasible (exploration never halts), and to
/// p_feasible alone when no objective model exists yet. Ties break by pool
/// order.
Configuration suggest_next(const DesignSpace& space, const SurrogateForest& forest,
                           std::optional<double> best_so_far, Rng& rng);

/// doe uniform evaluations followed by (budget - doe) Bayesian-optimization
/// iterations. An evaluator failure is recorded as an infeasible observation
/// with no objective; the loop never aborts. The trace's best_so_far is
/// non-decreasing by construction, and the whole run is deterministic for a
/// fixed seed.
SearchResult run_search(const DesignSpace& space, const SearchSettings& settings,
                        const Evaluator& evaluator);

/// CSV with header iteration,objective,feasible,best_so_far,cus,mus,mats,
/// throughput_gpps,latency_ns; absent fields stay empty.
std::string regret_csv(const std::vector<TracePoint>& trace);
void write_regret_csv(const std::string& path, const std::vector<TracePoint>& trace);

}  // namespace dpmlc
