#pragma once

#include "dpmlc/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dpmlc {

struct KMeansConfig {
    int k = 2;
    int max_iters = 50;
    std::uint64_t seed = 0;
};

struct KMeansModel {
    int k = 0;
    int d = 0;
    std::vector<double> centroids;  // k x d, row-major

    std::span<const double> centroid(int c) const {
        return {centroids.data() + static_cast<std::size_t>(c) * d, static_cast<std::size_t>(d)};
    }
};

/// Lloyd iterations from k-means++ seeding until the assignment reaches a
/// fixpoint or max_iters. An emptied cluster is re-seeded to the train point
/// farthest from its assigned centroid. If two centroids coincide after
/// convergence the fit is retried with a perturbed seed.
/// wcss_trace, when given, receives the within-cluster sum of squares after
/// every update step (non-increasing).
KMeansModel train_kmeans(const KMeansConfig& cfg, const Dataset& data,
                         std::vector<double>* wcss_trace = nullptr);

/// Nearest centroid by squared Euclidean distance; ties toward lowest index.
int assign_cluster(const KMeansModel& model, std::span<const double> row);

long param_count(const KMeansModel& model);

}  // namespace dpmlc
