#include "dpmlc/kmeans.hpp"

#include "dpmlc/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpmlc {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

struct FitAttempt {
    KMeansModel model;
    bool distinct = true;
};

FitAttempt lloyd(const KMeansConfig& cfg, const Dataset& data, std::uint64_t seed,
                 std::vector<double>* wcss_trace) {
    const auto& train = data.split.train_rows;
    const int n = static_cast<int>(train.size());
    const int d = data.width();
    Rng rng(seed);

    KMeansModel m;
    m.k = cfg.k;
    m.d = d;
    m.centroids.assign(static_cast<std::size_t>(cfg.k) * d, 0.0);

    // k-means++ seeding
    std::vector<double> min_sq(static_cast<std::size_t>(n), std::numeric_limits<double>::max());
    auto set_centroid = [&](int c, int train_idx) {
        const auto row = data.row(train[static_cast<std::size_t>(train_idx)]);
        for (int j = 0; j < d; ++j) m.centroids[static_cast<std::size_t>(c) * d + j] = row[static_cast<std::size_t>(j)];
    };
    set_centroid(0, static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n))));
    for (int c = 1; c < cfg.k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sq = sq_dist(data.row(train[static_cast<std::size_t>(i)]), m.centroid(c - 1));
            min_sq[static_cast<std::size_t>(i)] = std::min(min_sq[static_cast<std::size_t>(i)], sq);
            total += min_sq[static_cast<std::size_t>(i)];
        }
        int pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double cum = 0.0;
            for (int i = 0; i < n; ++i) {
                cum += min_sq[static_cast<std::size_t>(i)];
                if (cum >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        }
        set_centroid(c, pick);
    }

    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        // assignment step
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const int a = assign_cluster(m, data.row(train[static_cast<std::size_t>(i)]));
            if (a != assign[static_cast<std::size_t>(i)]) changed = true;
            assign[static_cast<std::size_t>(i)] = a;
        }
        if (!changed && iter > 0) break;  // assignment fixpoint

        // update step
        std::vector<double> sums(static_cast<std::size_t>(cfg.k) * d, 0.0);
        std::vector<int> counts(static_cast<std::size_t>(cfg.k), 0);
        for (int i = 0; i < n; ++i) {
            const auto row = data.row(train[static_cast<std::size_t>(i)]);
            const int c = assign[static_cast<std::size_t>(i)];
            ++counts[static_cast<std::size_t>(c)];
            for (int j = 0; j < d; ++j) sums[static_cast<std::size_t>(c) * d + j] += row[static_cast<std::size_t>(j)];
        }
        for (int c = 0; c < cfg.k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) {
                // re-seed the emptied centroid to the point farthest from its
                // assigned centroid, keeping k fixed
                double worst = -1.0;
                int worst_i = 0;
                for (int i = 0; i < n; ++i) {
                    const double sq = sq_dist(data.row(train[static_cast<std::size_t>(i)]),
                                              m.centroid(assign[static_cast<std::size_t>(i)]));
                    if (sq > worst) {
                        worst = sq;
                        worst_i = i;
                    }
                }
                set_centroid(c, worst_i);
                assign[static_cast<std::size_t>(worst_i)] = c;
                continue;
            }
            for (int j = 0; j < d; ++j)
                m.centroids[static_cast<std::size_t>(c) * d + j] =
                    sums[static_cast<std::size_t>(c) * d + j] / counts[static_cast<std::size_t>(c)];
        }

        if (wcss_trace) {
            double wcss = 0.0;
            for (int i = 0; i < n; ++i)
                wcss += sq_dist(data.row(train[static_cast<std::size_t>(i)]),
                                m.centroid(assign_cluster(m, data.row(train[static_cast<std::size_t>(i)]))));
            wcss_trace->push_back(wcss);
        }
    }

    FitAttempt out{std::move(m), true};
    for (int a = 0; a < cfg.k && out.distinct; ++a)
        for (int b = a + 1; b < cfg.k; ++b)
            if (sq_dist(out.model.centroid(a), out.model.centroid(b)) == 0.0) out.distinct = false;
    return out;
}

}  // namespace

KMeansModel train_kmeans(const KMeansConfig& cfg, const Dataset& data,
                         std::vector<double>* wcss_trace) {
    if (cfg.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (cfg.k > static_cast<int>(data.split.train_rows.size()))
        throw std::invalid_argument("kmeans: k exceeds the number of train rows");

    // identical centroids can only arise from duplicate data points; break the
    // tie by re-seeding
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        if (wcss_trace) wcss_trace->clear();
        FitAttempt fit = lloyd(cfg, data, cfg.seed + attempt * 0x9e37u, wcss_trace);
        if (fit.distinct || cfg.k == 1) return std::move(fit.model);
    }
    throw std::runtime_error("kmeans: could not separate centroids (duplicate data points?)");
}

int assign_cluster(const KMeansModel& model, std::span<const double> row) {
    int best = 0;
    double best_sq = sq_dist(row, model.centroid(0));
    for (int c = 1; c < model.k; ++c) {
        const double sq = sq_dist(row, model.centroid(c));
        if (sq < best_sq) {
            best_sq = sq;
            best = c;
        }
    }
    return best;
}

long param_count(const KMeansModel& model) {
    return static_cast<long>(model.k) * model.d;
}

}  // namespace dpmlc
