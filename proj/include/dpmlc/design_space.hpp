#pragma once

#include "dpmlc/rng.hpp"
#include "dpmlc/spec.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace dpmlc {

enum class ParamKind { real, integer, ordinal, categorical };

struct Parameter {
    std::string name;
    ParamKind kind = ParamKind::real;
    // real
    double lo = 0.0, hi = 1.0;
    bool log_scale = false;
    // integer
    std::int64_t ilo = 0, ihi = 1;
    // ordinal: ordered numeric values
    std::vector<double> ordinal_values;
    // categorical: unordered value set
    std::vector<std::string> categories;

    static Parameter real(std::string name, double lo, double hi, bool log_scale = false);
    static Parameter integer(std::string name, std::int64_t lo, std::int64_t hi);
    static Parameter ordinal(std::string name, std::vector<double> values);
    static Parameter categorical(std::string name, std::vector<std::string> values);
};

/// One value per kind: real/ordinal -> double, integer -> int64,
/// categorical -> the category string.
using ParamValue = std::variant<double, std::int64_t, std::string>;

struct Configuration {
    std::vector<ParamValue> values;
    bool operator==(const Configuration&) const = default;
};

/// The search domain: an ordered list of typed parameters with bounds.
struct DesignSpace {
    std::vector<Parameter> params;

    int index_of(const std::string& name) const;
    bool contains(const Configuration& cfg) const;

    /// Numeric embedding used by the surrogate trees: real/integer values as
    /// given, ordinal as its position, categorical as its category index.
    std::vector<double> encode(const Configuration& cfg) const;

    double get_real(const Configuration& cfg, const std::string& name) const;
    std::int64_t get_int(const Configuration& cfg, const std::string& name) const;
    double get_ordinal(const Configuration& cfg, const std::string& name) const;
    const std::string& get_categorical(const Configuration& cfg, const std::string& name) const;

    std::string describe(const Configuration& cfg) const;  // "k=5, lr=0.01, ..."
};

/// n i.i.d. uniform samples (log-uniform where flagged), deterministic for a
/// fixed rng state.
std::vector<Configuration> sample_uniform(const DesignSpace& space, int n, Rng& rng);

/// The tunable parameters of an algorithm on a platform:
///   dnn    -> hidden_layers 1..10, width 2..64 (+ taper flag), activation,
///             learning_rate (log), batch_size
///   kmeans -> k in 2..min(16, num_mats)
///   svm    -> learning_rate (log), regularization (log), epochs
/// Throws SpecError for unsupported algorithm/platform pairs or degenerate
/// bounds (e.g. kmeans with num_mats < 2).
DesignSpace build_design_space(Algorithm algorithm, const PlatformSpec& platform);

/// True when the artifact has a cost model for the pair at all.
bool algorithm_supported(Algorithm algorithm, PlatformKind kind);

}  // namespace dpmlc
