#pragma once

#include "dpmlc/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dpmlc {

enum class Activation { relu, tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Dense row-major matrix, just enough linear algebra for small nets.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    bool operator==(const Mat&) const = default;
};

struct MlpConfig {
    int hidden_layers = 1;
    std::vector<int> neurons;  // one entry per hidden layer
    Activation activation = Activation::relu;
    double learning_rate = 0.01;
    int batch_size = 32;
    int epochs = 20;
    std::uint64_t seed = 0;
};

/// Feed-forward classifier: hidden layers with the configured activation and
/// a linear output layer (softmax applied in the loss only).
struct MlpModel {
    std::vector<Mat> weights;               // per layer, out x in
    std::vector<std::vector<double>> biases;
    Activation activation = Activation::relu;
    int input_width = 0;
    int output_width = 0;
    bool diverged = false;  // training hit a non-finite loss

    std::vector<double> logits(std::span<const double> row) const;
};

/// Mini-batch SGD on softmax cross-entropy. Initialization, shuffling, and
/// batching are all seeded, so identical inputs give identical weights.
/// epochs = 0 returns the freshly initialized model. A non-finite loss stops
/// training and sets diverged instead of throwing.
MlpModel train_mlp(const MlpConfig& cfg, const Dataset& data);

/// argmax of the output activations; ties break toward the lowest index.
int predict_mlp(const MlpModel& model, std::span<const double> row);

struct MlpGradients {
    std::vector<Mat> weight_grads;
    std::vector<std::vector<double>> bias_grads;
    double loss = 0.0;
};

/// Mean softmax cross-entropy gradients over a batch of (row, label) pairs.
/// Exposed so tests can compare against finite differences.
MlpGradients mlp_backprop(const MlpModel& model, const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels);

long param_count(const MlpModel& model);

}  // namespace dpmlc
