#include "dpmlc/mlp.hpp"

#include "dpmlc/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpmlc {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation '" + s + "'");
}

namespace {

double activate(double z, Activation a) {
    return a == Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

double activate_grad(double z, Activation a) {
    if (a == Activation::relu) return z > 0.0 ? 1.0 : 0.0;
    const double t = std::tanh(z);
    return 1.0 - t * t;
}

struct Forward {
    std::vector<std::vector<double>> pre;   // z per layer
    std::vector<std::vector<double>> post;  // act(z) per layer; last layer linear
};

Forward forward_pass(const MlpModel& m, std::span<const double> row) {
    Forward f;
    std::vector<double> cur(row.begin(), row.end());
    const int L = static_cast<int>(m.weights.size());
    for (int l = 0; l < L; ++l) {
        const Mat& w = m.weights[static_cast<std::size_t>(l)];
        const auto& b = m.biases[static_cast<std::size_t>(l)];
        std::vector<double> z(static_cast<std::size_t>(w.rows));
        for (int i = 0; i < w.rows; ++i) {
            double acc = b[static_cast<std::size_t>(i)];
            for (int j = 0; j < w.cols; ++j) acc += w.at(i, j) * cur[static_cast<std::size_t>(j)];
            z[static_cast<std::size_t>(i)] = acc;
        }
        f.pre.push_back(z);
        if (l + 1 < L)
            for (auto& v : z) v = activate(v, m.activation);
        f.post.push_back(z);
        cur = z;
    }
    return f;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    double mx = logits[0];
    for (double v : logits) mx = std::max(mx, v);
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (auto& v : p) v /= sum;
    return p;
}

MlpModel init_model(const MlpConfig& cfg, int input_width, int num_classes) {
    if (cfg.hidden_layers < 1 || cfg.hidden_layers > 10)
        throw std::invalid_argument("mlp: hidden_layers must be in 1..10");
    if (static_cast<int>(cfg.neurons.size()) != cfg.hidden_layers)
        throw std::invalid_argument("mlp: neurons list must have one entry per hidden layer");
    for (int w : cfg.neurons)
        if (w < 1) throw std::invalid_argument("mlp: every layer width must be >= 1");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("mlp: learning rate must be > 0");

    MlpModel m;
    m.activation = cfg.activation;
    m.input_width = input_width;
    m.output_width = num_classes;

    std::vector<int> widths{input_width};
    widths.insert(widths.end(), cfg.neurons.begin(), cfg.neurons.end());
    widths.push_back(num_classes);

    Rng rng(cfg.seed ^ 0x6d6c70u);  // distinct stream from the shuffle rng
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int fan_in = widths[l], fan_out = widths[l + 1];
        Mat w(fan_out, fan_in);
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (auto& v : w.a) v = rng.uniform(-bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return m;
}

}  // namespace

std::vector<double> MlpModel::logits(std::span<const double> row) const {
    if (static_cast<int>(row.size()) != input_width)
        throw std::invalid_argument("mlp: row width " + std::to_string(row.size()) +
                                    " does not match input width " + std::to_string(input_width));
    return forward_pass(*this, row).post.back();
}

int predict_mlp(const MlpModel& model, std::span<const double> row) {
    const auto out = model.logits(row);
    int best = 0;
    for (int i = 1; i < static_cast<int>(out.size()); ++i)
        if (out[static_cast<std::size_t>(i)] > out[static_cast<std::size_t>(best)]) best = i;
    return best;
}

MlpGradients mlp_backprop(const MlpModel& model, const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels) {
    const int L = static_cast<int>(model.weights.size());
    MlpGradients g;
    for (int l = 0; l < L; ++l) {
        g.weight_grads.emplace_back(model.weights[static_cast<std::size_t>(l)].rows,
                                    model.weights[static_cast<std::size_t>(l)].cols);
        g.bias_grads.emplace_back(model.biases[static_cast<std::size_t>(l)].size(), 0.0);
    }

    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
        const Forward f = forward_pass(model, rows[s]);
        const auto p = softmax(f.post.back());
        g.loss -= inv_n * std::log(std::max(p[static_cast<std::size_t>(labels[s])], 1e-300));

        // delta at the output: softmax cross-entropy
        std::vector<double> delta = p;
        delta[static_cast<std::size_t>(labels[s])] -= 1.0;

        for (int l = L - 1; l >= 0; --l) {
            const Mat& w = model.weights[static_cast<std::size_t>(l)];
            const std::vector<double>& input =
                l == 0 ? rows[s] : f.post[static_cast<std::size_t>(l - 1)];
            for (int i = 0; i < w.rows; ++i) {
                const double d = delta[static_cast<std::size_t>(i)] * inv_n;
                g.bias_grads[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] += d;
                for (int j = 0; j < w.cols; ++j)
                    g.weight_grads[static_cast<std::size_t>(l)].at(i, j) +=
                        d * input[static_cast<std::size_t>(j)];
            }
            if (l > 0) {
                std::vector<double> prev(static_cast<std::size_t>(w.cols), 0.0);
                for (int j = 0; j < w.cols; ++j) {
                    double acc = 0.0;
                    for (int i = 0; i < w.rows; ++i)
                        acc += w.at(i, j) * delta[static_cast<std::size_t>(i)];
                    prev[static_cast<std::size_t>(j)] =
                        acc * activate_grad(f.pre[static_cast<std::size_t>(l - 1)]
                                                 [static_cast<std::size_t>(j)],
                                            model.activation);
                }
                delta = std::move(prev);
            }
        }
    }
    return g;
}

MlpModel train_mlp(const MlpConfig& cfg, const Dataset& data) {
    if (data.num_classes < 2) throw std::invalid_argument("mlp: need at least 2 classes");
    if (cfg.batch_size < 1) throw std::invalid_argument("mlp: batch_size must be >= 1");
    if (cfg.epochs < 0) throw std::invalid_argument("mlp: epochs must be >= 0");

    MlpModel model = init_model(cfg, data.width(), data.num_classes);
    Rng shuffle_rng(cfg.seed);

    std::vector<int> order = data.split.train_rows;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<std::vector<double>> rows;
            std::vector<int> labels;
            for (std::size_t i = start; i < stop; ++i) {
                const auto r = data.row(order[i]);
                rows.emplace_back(r.begin(), r.end());
                labels.push_back(data.labels[static_cast<std::size_t>(order[i])]);
            }
            const MlpGradients g = mlp_backprop(model, rows, labels);
            if (!std::isfinite(g.loss)) {
                model.diverged = true;
                return model;
            }
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                for (std::size_t i = 0; i < model.weights[l].a.size(); ++i)
                    model.weights[l].a[i] -= cfg.learning_rate * g.weight_grads[l].a[i];
                for (std::size_t i = 0; i < model.biases[l].size(); ++i)
                    model.biases[l][i] -= cfg.learning_rate * g.bias_grads[l][i];
            }
        }
    }

    for (const auto& w : model.weights)
        for (double v : w.a)
            if (!std::isfinite(v)) model.diverged = true;
    return model;
}

long param_count(const MlpModel& model) {
    long n = 0;
    for (const auto& w : model.weights) n += static_cast<long>(w.a.size());
    for (const auto& b : model.biases) n += static_cast<long>(b.size());
    return n;
}

}  // namespace dpmlc
