#include "dpmlc/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpmlc {

namespace {

struct Sample {
    const std::vector<double>* x;
    double y;  // objective, or 1/0 feasibility
};

struct SplitChoice {
    bool found = false;
    int param = -1;
    bool subset_split = false;
    double threshold = 0.0;
    std::uint32_t left_mask = 0;
    double score = 0.0;  // impurity reduction
};

double sse(const std::vector<Sample>& s, const std::vector<int>& idx) {
    if (idx.empty()) return 0.0;
    double mean = 0.0;
    for (int i : idx) mean += s[static_cast<std::size_t>(i)].y;
    mean /= static_cast<double>(idx.size());
    double acc = 0.0;
    for (int i : idx) {
        const double d = s[static_cast<std::size_t>(i)].y - mean;
        acc += d * d;
    }
    return acc;
}

double gini(const std::vector<Sample>& s, const std::vector<int>& idx) {
    if (idx.empty()) return 0.0;
    double pos = 0.0;
    for (int i : idx) pos += s[static_cast<std::size_t>(i)].y;
    const double p = pos / static_cast<double>(idx.size());
    return 2.0 * p * (1.0 - p) * static_cast<double>(idx.size());
}

// Weighted impurity of a candidate partition; regression uses SSE,
// classification Gini mass.
double partition_cost(const std::vector<Sample>& s, const std::vector<int>& left,
                      const std::vector<int>& right, bool regression) {
    return regression ? sse(s, left) + sse(s, right) : gini(s, left) + gini(s, right);
}

class TreeBuilder {
public:
    TreeBuilder(const DesignSpace& space, const std::vector<Sample>& samples, bool regression)
        : space_(space), samples_(samples), regression_(regression) {}

    Tree build(const std::vector<int>& idx) {
        Tree t;
        t.root = grow(t, idx);
        return t;
    }

private:
    int grow(Tree& t, const std::vector<int>& idx) {
        const double parent_cost =
            regression_ ? sse(samples_, idx) : gini(samples_, idx);
        SplitChoice best;
        if (static_cast<int>(idx.size()) >= 2 * kMinLeaf && parent_cost > 1e-12)
            best = find_split(idx, parent_cost);

        if (!best.found) {
            Tree::Node leaf;
            double mean = 0.0;
            for (int i : idx) mean += samples_[static_cast<std::size_t>(i)].y;
            leaf.leaf_value = idx.empty() ? 0.0 : mean / static_cast<double>(idx.size());
            t.nodes.push_back(leaf);
            return static_cast<int>(t.nodes.size()) - 1;
        }

        std::vector<int> left, right;
        for (int i : idx)
            (goes_left(samples_[static_cast<std::size_t>(i)], best) ? left : right).push_back(i);

        Tree::Node node;
        node.param = best.param;
        node.subset_split = best.subset_split;
        node.threshold = best.threshold;
        node.left_mask = best.left_mask;
        const int l = grow(t, left);
        const int r = grow(t, right);
        node.left = l;
        node.right = r;
        t.nodes.push_back(node);
        return static_cast<int>(t.nodes.size()) - 1;
    }

    static bool goes_left(const Sample& s, const SplitChoice& c) {
        const double v = (*s.x)[static_cast<std::size_t>(c.param)];
        if (c.subset_split)
            return (c.left_mask >> static_cast<std::uint32_t>(v)) & 1u;
        return v <= c.threshold;
    }

    SplitChoice find_split(const std::vector<int>& idx, double parent_cost) {
        SplitChoice best;
        for (std::size_t p = 0; p < space_.params.size(); ++p) {
            const Parameter& param = space_.params[p];
            if (param.kind == ParamKind::categorical)
                consider_subset_splits(idx, static_cast<int>(p), param, parent_cost, best);
            else
                consider_threshold_splits(idx, static_cast<int>(p), parent_cost, best);
        }
        return best;
    }

    void consider_threshold_splits(const std::vector<int>& idx, int p, double parent_cost,
                                   SplitChoice& best) {
        std::vector<double> values;
        values.reserve(idx.size());
        for (int i : idx) values.push_back((*samples_[static_cast<std::size_t>(i)].x)[static_cast<std::size_t>(p)]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            const double threshold = 0.5 * (values[v] + values[v + 1]);
            std::vector<int> left, right;
            for (int i : idx) {
                const double x = (*samples_[static_cast<std::size_t>(i)].x)[static_cast<std::size_t>(p)];
                (x <= threshold ? left : right).push_back(i);
            }
            score_candidate(p, false, threshold, 0, left, right, parent_cost, best);
        }
    }

    // Subsets enumerated greedily: categories ordered by their mean response,
    // then every prefix of that order is a candidate left set.
    void consider_subset_splits(const std::vector<int>& idx, int p, const Parameter& param,
                                double parent_cost, SplitChoice& best) {
        const std::size_t n_cat = param.categories.size();
        std::vector<double> sum(n_cat, 0.0);
        std::vector<int> count(n_cat, 0);
        for (int i : idx) {
            const auto c = static_cast<std::size_t>(
                (*samples_[static_cast<std::size_t>(i)].x)[static_cast<std::size_t>(p)]);
            sum[c] += samples_[static_cast<std::size_t>(i)].y;
            ++count[c];
        }
        std::vector<std::size_t> order;
        for (std::size_t c = 0; c < n_cat; ++c)
            if (count[c] > 0) order.push_back(c);
        if (order.size() < 2) return;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ma = sum[a] / count[a], mb = sum[b] / count[b];
            return ma < mb || (ma == mb && a < b);
        });

        std::uint32_t mask = 0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            mask |= 1u << order[k];
            std::vector<int> left, right;
            for (int i : idx) {
                const auto c = static_cast<std::uint32_t>(
                    (*samples_[static_cast<std::size_t>(i)].x)[static_cast<std::size_t>(p)]);
                ((mask >> c) & 1u ? left : right).push_back(i);
            }
            score_candidate(p, true, 0.0, mask, left, right, parent_cost, best);
        }
    }

    void score_candidate(int p, bool subset, double threshold, std::uint32_t mask,
                         const std::vector<int>& left, const std::vector<int>& right,
                         double parent_cost, SplitChoice& best) {
        if (static_cast<int>(left.size()) < kMinLeaf || static_cast<int>(right.size()) < kMinLeaf)
            return;
        const double reduction = parent_cost - partition_cost(samples_, left, right, regression_);
        if (reduction > best.score + 1e-15) {
            best.found = true;
            best.param = p;
            best.subset_split = subset;
            best.threshold = threshold;
            best.left_mask = mask;
            best.score = reduction;
        }
    }

    const DesignSpace& space_;
    const std::vector<Sample>& samples_;
    bool regression_;
};

std::vector<Tree> fit_trees(const DesignSpace& space, const std::vector<Sample>& samples,
                            bool regression, Rng& rng) {
    std::vector<Tree> trees;
    trees.reserve(kForestTrees);
    TreeBuilder builder(space, samples, regression);
    for (int t = 0; t < kForestTrees; ++t) {
        std::vector<int> boot(samples.size());
        for (auto& i : boot) i = static_cast<int>(rng.uniform_index(samples.size()));
        trees.push_back(builder.build(boot));
    }
    return trees;
}

}  // namespace

double Tree::predict(const std::vector<double>& x) const {
    int n = root;
    while (nodes[static_cast<std::size_t>(n)].param >= 0) {
        const Node& node = nodes[static_cast<std::size_t>(n)];
        const double v = x[static_cast<std::size_t>(node.param)];
        const bool left = node.subset_split
                              ? ((node.left_mask >> static_cast<std::uint32_t>(v)) & 1u) != 0
                              : v <= node.threshold;
        n = left ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(n)].leaf_value;
}

SurrogateForest fit_forest(const DesignSpace& space, const std::vector<Observation>& history,
                           Rng& rng) {
    if (history.size() < 2) throw std::invalid_argument("fit_forest: need >= 2 observations");

    std::vector<std::vector<double>> encoded;
    encoded.reserve(history.size());
    for (const auto& o : history) encoded.push_back(space.encode(o.x));

    SurrogateForest forest;

    // objective model over every observation that actually trained
    std::vector<Sample> reg;
    for (std::size_t i = 0; i < history.size(); ++i)
        if (history[i].objective)
            reg.push_back({&encoded[i], *history[i].objective});
    if (!reg.empty()) forest.objective_trees = fit_trees(space, reg, true, rng);

    // feasibility model only once both outcomes exist; an all-feasible
    // history predicts probability 1 everywhere
    bool any_infeasible = false, any_feasible = false;
    for (const auto& o : history) (o.feasible ? any_feasible : any_infeasible) = true;
    if (any_infeasible && any_feasible) {
        std::vector<Sample> cls;
        cls.reserve(history.size());
        for (std::size_t i = 0; i < history.size(); ++i)
            cls.push_back({&encoded[i], history[i].feasible ? 1.0 : 0.0});
        forest.feasibility_trees = fit_trees(space, cls, false, rng);
    } else if (any_infeasible) {
        // nothing feasible yet: a single stub tree voting infeasible keeps
        // p_feasible honest at 0 until evidence arrives
        Tree stub;
        stub.nodes.push_back({});
        stub.nodes.back().leaf_value = 0.0;
        stub.root = 0;
        forest.feasibility_trees.assign(kForestTrees, stub);
    }
    return forest;
}

Prediction predict(const SurrogateForest& forest, const DesignSpace& space,
                   const Configuration& cfg) {
    const auto x = space.encode(cfg);
    Prediction out;
    if (!forest.objective_trees.empty()) {
        double mean = 0.0;
        std::vector<double> preds;
        preds.reserve(forest.objective_trees.size());
        for (const auto& t : forest.objective_trees) {
            preds.push_back(t.predict(x));
            mean += preds.back();
        }
        mean /= static_cast<double>(preds.size());
        double var = 0.0;
        for (double p : preds) var += (p - mean) * (p - mean);
        out.mean = mean;
        out.variance = var / static_cast<double>(preds.size());
    }
    if (!forest.feasibility_trees.empty()) {
        int votes = 0;
        for (const auto& t : forest.feasibility_trees)
            if (t.predict(x) >= 0.5) ++votes;
        out.p_feasible =
            static_cast<double>(votes) / static_cast<double>(forest.feasibility_trees.size());
    }
    return out;
}

double expected_improvement(double mean, double variance, double best_so_far) {
    if (variance < 0.0) throw std::invalid_argument("expected_improvement: negative variance");
    const double sigma = std::sqrt(variance);
    const double delta = mean - best_so_far;
    if (sigma == 0.0) return std::max(delta, 0.0);
    const double z = delta / sigma;
    const double phi = std::exp(-0.5 * z * z) / 2.5066282746310005024;   // pdf
    const double Phi = 0.5 * std::erfc(-z / 1.4142135623730950488);      // cdf
    return std::max(delta * Phi + sigma * phi, 0.0);
}

}  // namespace dpmlc
