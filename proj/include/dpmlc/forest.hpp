#pragma once

#include "dpmlc/design_space.hpp"
#include "dpmlc/targets.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dpmlc {

/// One evaluated point of the black-box objective.
struct Observation {
    Configuration x;
    std::optional<double> objective;  // absent when training diverged or errored
    bool feasible = false;
    ResourceReport resources;
    PerfReport perf;
    bool has_reports = false;
    std::vector<double> constraint_slacks;  // feasible iff all >= 0
};

/// Axis-aligned decision tree over the design-space encoding. Numeric and
/// ordinal parameters split on a threshold; categorical parameters split on a
/// subset of category indices (as a bitmask).
struct Tree {
    struct Node {
        int param = -1;  // -1 marks a leaf
        bool subset_split = false;
        double threshold = 0.0;
        std::uint32_t left_mask = 0;
        int left = -1, right = -1;
        double leaf_value = 0.0;
    };
    std::vector<Node> nodes;
    int root = -1;

    double predict(const std::vector<double>& x) const;
};

/// Random-forest surrogate: regression trees for the objective and
/// classification trees for feasibility. The regression forest is absent when
/// no observation carries an objective; the feasibility forest is empty until
/// an infeasible point has been seen (probability 1 everywhere before that).
struct SurrogateForest {
    std::vector<Tree> objective_trees;
    std::vector<Tree> feasibility_trees;
    bool has_objective_model() const { return !objective_trees.empty(); }
};

inline constexpr int kForestTrees = 10;
inline constexpr int kMinLeaf = 2;

/// Fit on bootstrap resamples; regression splits maximize variance reduction,
/// classification splits minimize Gini impurity; categorical subsets are
/// enumerated greedily by category mean. Needs |history| >= 2 with at least
/// one objective value (or all-infeasible history, which yields a
/// feasibility-only forest).
SurrogateForest fit_forest(const DesignSpace& space, const std::vector<Observation>& history,
                           Rng& rng);

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    double p_feasible = 1.0;
};

/// Mean and population variance across regression trees; p_feasible is the
/// fraction of classification trees voting feasible.
Prediction predict(const SurrogateForest& forest, const DesignSpace& space,
                   const Configuration& cfg);

/// Expected improvement for maximization: (mu-best)*Phi(z) + sigma*phi(z)
/// with z = (mu-best)/sigma; max(mu-best, 0) when sigma is 0. Never negative.
double expected_improvement(double mean, double variance, double best_so_far);

}  // namespace dpmlc
