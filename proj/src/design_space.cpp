#include "dpmlc/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dpmlc {

Parameter Parameter::real(std::string name, double lo, double hi, bool log_scale) {
    if (!(lo < hi)) throw std::invalid_argument("parameter " + name + ": lower must be < upper");
    if (log_scale && lo <= 0.0)
        throw std::invalid_argument("parameter " + name + ": log scale needs positive bounds");
    Parameter p;
    p.name = std::move(name);
    p.kind = ParamKind::real;
    p.lo = lo;
    p.hi = hi;
    p.log_scale = log_scale;
    return p;
}

Parameter Parameter::integer(std::string name, std::int64_t lo, std::int64_t hi) {
    if (!(lo < hi)) throw std::invalid_argument("parameter " + name + ": lower must be < upper");
    Parameter p;
    p.name = std::move(name);
    p.kind = ParamKind::integer;
    p.ilo = lo;
    p.ihi = hi;
    return p;
}

Parameter Parameter::ordinal(std::string name, std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("parameter " + name + ": empty value list");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument("parameter " + name + ": ordinal values must increase");
    Parameter p;
    p.name = std::move(name);
    p.kind = ParamKind::ordinal;
    p.ordinal_values = std::move(values);
    return p;
}

Parameter Parameter::categorical(std::string name, std::vector<std::string> values) {
    if (values.empty()) throw std::invalid_argument("parameter " + name + ": empty value list");
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            if (values[i] == values[j])
                throw std::invalid_argument("parameter " + name + ": duplicate category");
    Parameter p;
    p.name = std::move(name);
    p.kind = ParamKind::categorical;
    p.categories = std::move(values);
    return p;
}

int DesignSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("design space has no parameter '" + name + "'");
}

bool DesignSpace::contains(const Configuration& cfg) const {
    if (cfg.values.size() != params.size()) return false;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Parameter& p = params[i];
        const ParamValue& v = cfg.values[i];
        switch (p.kind) {
            case ParamKind::real: {
                const auto* x = std::get_if<double>(&v);
                if (!x || *x < p.lo || *x > p.hi) return false;
                break;
            }
            case ParamKind::integer: {
                const auto* x = std::get_if<std::int64_t>(&v);
                if (!x || *x < p.ilo || *x > p.ihi) return false;
                break;
            }
            case ParamKind::ordinal: {
                const auto* x = std::get_if<double>(&v);
                if (!x) return false;
                if (std::find(p.ordinal_values.begin(), p.ordinal_values.end(), *x) ==
                    p.ordinal_values.end())
                    return false;
                break;
            }
            case ParamKind::categorical: {
                const auto* x = std::get_if<std::string>(&v);
                if (!x) return false;
                if (std::find(p.categories.begin(), p.categories.end(), *x) == p.categories.end())
                    return false;
                break;
            }
        }
    }
    return true;
}

std::vector<double> DesignSpace::encode(const Configuration& cfg) const {
    std::vector<double> x(params.size(), 0.0);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Parameter& p = params[i];
        switch (p.kind) {
            case ParamKind::real:
                x[i] = std::get<double>(cfg.values[i]);
                break;
            case ParamKind::integer:
                x[i] = static_cast<double>(std::get<std::int64_t>(cfg.values[i]));
                break;
            case ParamKind::ordinal: {
                const double v = std::get<double>(cfg.values[i]);
                const auto it = std::find(p.ordinal_values.begin(), p.ordinal_values.end(), v);
                x[i] = static_cast<double>(it - p.ordinal_values.begin());
                break;
            }
            case ParamKind::categorical: {
                const auto& v = std::get<std::string>(cfg.values[i]);
                const auto it = std::find(p.categories.begin(), p.categories.end(), v);
                x[i] = static_cast<double>(it - p.categories.begin());
                break;
            }
        }
    }
    return x;
}

double DesignSpace::get_real(const Configuration& cfg, const std::string& name) const {
    return std::get<double>(cfg.values[static_cast<std::size_t>(index_of(name))]);
}

std::int64_t DesignSpace::get_int(const Configuration& cfg, const std::string& name) const {
    return std::get<std::int64_t>(cfg.values[static_cast<std::size_t>(index_of(name))]);
}

double DesignSpace::get_ordinal(const Configuration& cfg, const std::string& name) const {
    return std::get<double>(cfg.values[static_cast<std::size_t>(index_of(name))]);
}

const std::string& DesignSpace::get_categorical(const Configuration& cfg,
                                                const std::string& name) const {
    return std::get<std::string>(cfg.values[static_cast<std::size_t>(index_of(name))]);
}

std::string DesignSpace::describe(const Configuration& cfg) const {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].name + "=";
        const ParamValue& v = cfg.values[i];
        if (const auto* d = std::get_if<double>(&v)) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6g", *d);
            out += buf;
        } else if (const auto* n = std::get_if<std::int64_t>(&v)) {
            out += std::to_string(*n);
        } else {
            out += std::get<std::string>(v);
        }
    }
    return out;
}

std::vector<Configuration> sample_uniform(const DesignSpace& space, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_uniform: n must be >= 1");
    std::vector<Configuration> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        Configuration cfg;
        cfg.values.reserve(space.params.size());
        for (const Parameter& p : space.params) {
            switch (p.kind) {
                case ParamKind::real:
                    cfg.values.emplace_back(p.log_scale ? rng.log_uniform(p.lo, p.hi)
                                                        : rng.uniform(p.lo, p.hi));
                    break;
                case ParamKind::integer:
                    cfg.values.emplace_back(rng.uniform_int(p.ilo, p.ihi));
                    break;
                case ParamKind::ordinal:
                    cfg.values.emplace_back(
                        p.ordinal_values[rng.uniform_index(p.ordinal_values.size())]);
                    break;
                case ParamKind::categorical:
                    cfg.values.emplace_back(p.categories[rng.uniform_index(p.categories.size())]);
                    break;
            }
        }
        out.push_back(std::move(cfg));
    }
    return out;
}

bool algorithm_supported(Algorithm algorithm, PlatformKind kind) {
    switch (algorithm) {
        case Algorithm::dnn: return kind == PlatformKind::cgra_grid;
        case Algorithm::kmeans: return kind == PlatformKind::mat_pipeline;
        case Algorithm::svm: return kind == PlatformKind::mat_pipeline;
    }
    return false;
}

DesignSpace build_design_space(Algorithm algorithm, const PlatformSpec& platform) {
    if (!algorithm_supported(algorithm, platform.kind))
        throw SpecError("algorithm " + to_string(algorithm) + " has no cost model on " +
                        to_string(platform.kind));

    DesignSpace space;
    switch (algorithm) {
        case Algorithm::dnn:
            space.params.push_back(Parameter::integer("hidden_layers", 1, 10));
            space.params.push_back(Parameter::integer("width", 2, 64));
            space.params.push_back(Parameter::categorical("taper", {"no", "yes"}));
            space.params.push_back(Parameter::categorical("activation", {"relu", "tanh"}));
            space.params.push_back(Parameter::real("learning_rate", 1e-4, 1e-1, true));
            space.params.push_back(Parameter::ordinal("batch_size", {16, 32, 64, 128}));
            break;
        case Algorithm::kmeans: {
            const int k_max = std::min(16, platform.mat.num_mats);
            if (k_max < 2)
                throw SpecError("kmeans: MAT budget " + std::to_string(platform.mat.num_mats) +
                                " leaves no room for k >= 2");
            // a budget of exactly 2 degenerates to a single admissible k
            if (k_max == 2)
                space.params.push_back(Parameter::ordinal("k", {2}));
            else
                space.params.push_back(Parameter::integer("k", 2, k_max));
            break;
        }
        case Algorithm::svm:
            space.params.push_back(Parameter::real("learning_rate", 1e-4, 1e-1, true));
            space.params.push_back(Parameter::real("regularization", 1e-5, 1.0, true));
            space.params.push_back(Parameter::ordinal("epochs", {20, 50, 100, 200}));
            break;
    }
    return space;
}

}  // namespace dpmlc
