#include "dpmlc/svm.hpp"

#include "dpmlc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dpmlc {

SvmModel train_svm(const SvmConfig& cfg, const Dataset& data) {
    if (data.num_classes != 2) throw std::invalid_argument("svm: binary labels required");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("svm: learning rate must be > 0");
    if (cfg.epochs < 0) throw std::invalid_argument("svm: epochs must be >= 0");

    const int d = data.width();
    SvmModel m;
    m.w.assign(static_cast<std::size_t>(d), 0.0);

    Rng rng(cfg.seed);
    std::vector<int> order = data.split.train_rows;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (int r : order) {
            const auto row = data.row(r);
            const double y = data.labels[static_cast<std::size_t>(r)] == 1 ? 1.0 : -1.0;
            const double margin = y * (svm_score(m, row));
            for (int j = 0; j < d; ++j) {
                double grad = 2.0 * cfg.regularization * m.w[static_cast<std::size_t>(j)];
                if (margin < 1.0) grad -= y * row[static_cast<std::size_t>(j)];
                m.w[static_cast<std::size_t>(j)] -= cfg.learning_rate * grad;
            }
            if (margin < 1.0) m.b += cfg.learning_rate * y;
        }
    }

    for (double v : m.w)
        if (!std::isfinite(v)) m.diverged = true;
    if (!std::isfinite(m.b)) m.diverged = true;
    return m;
}

double svm_score(const SvmModel& model, std::span<const double> row) {
    double acc = model.b;
    for (std::size_t j = 0; j < row.size(); ++j) acc += model.w[j] * row[j];
    return acc;
}

int predict_svm(const SvmModel& model, std::span<const double> row) {
    return svm_score(model, row) >= 0.0 ? 1 : 0;
}

double svm_objective(const SvmModel& model, const Dataset& data, double regularization) {
    double norm_sq = 0.0;
    for (double v : model.w) norm_sq += v * v;
    double hinge = 0.0;
    for (int r : data.split.train_rows) {
        const double y = data.labels[static_cast<std::size_t>(r)] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * svm_score(model, data.row(r)));
    }
    return regularization * norm_sq + hinge / static_cast<double>(data.split.train_rows.size());
}

long param_count(const SvmModel& model) { return static_cast<long>(model.w.size()) + 1; }

}  // namespace dpmlc
