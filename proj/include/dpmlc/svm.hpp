#pragma once

#include "dpmlc/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dpmlc {

struct SvmConfig {
    double learning_rate = 0.01;
    int epochs = 100;
    double regularization = 1e-3;
    std::uint64_t seed = 0;
};

/// Linear binary classifier: predicts 1 when w.x + b >= 0.
struct SvmModel {
    std::vector<double> w;
    double b = 0.0;
    bool diverged = false;
};

/// Regularized hinge loss minimized by per-sample subgradient descent with a
/// seeded shuffle per epoch. Weights start at zero, so flipping every label
/// exactly negates the trained model.
SvmModel train_svm(const SvmConfig& cfg, const Dataset& data);

double svm_score(const SvmModel& model, std::span<const double> row);
int predict_svm(const SvmModel& model, std::span<const double> row);

/// lambda * |w|^2 + mean hinge loss over the given rows (test oracle hook).
double svm_objective(const SvmModel& model, const Dataset& data, double regularization);

long param_count(const SvmModel& model);

}  // namespace dpmlc
