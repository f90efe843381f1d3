#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpmlc {

/// Error for malformed pipeline specs and schedule strings. The message
/// carries position context where available.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Metric { f1, v_measure };
enum class Algorithm { dnn, kmeans, svm };
enum class PlatformKind { cgra_grid, mat_pipeline };

std::string to_string(Metric m);
std::string to_string(Algorithm a);
std::string to_string(PlatformKind k);
Metric metric_from_string(const std::string& s);
Algorithm algorithm_from_string(const std::string& s);
PlatformKind platform_kind_from_string(const std::string& s);

struct ModelSpec {
    std::string name;
    Metric optimization_metric = Metric::f1;
    std::vector<Algorithm> algorithms;  // empty = all metric-compatible algorithms
    std::string dataset_ref;            // path to a dataset descriptor, relative to the spec file

    bool operator==(const ModelSpec&) const = default;
};

/// Candidate algorithms for a model: the explicit list, or every algorithm
/// compatible with the model's metric when the list is empty.
std::vector<Algorithm> effective_algorithms(const ModelSpec& m);

struct CgraResources {
    int cu_rows = 16, cu_cols = 16;
    int mu_rows = 16, mu_cols = 16;
    bool operator==(const CgraResources&) const = default;
};

struct MatResources {
    int num_mats = 1;
    bool operator==(const MatResources&) const = default;
};

struct PlatformSpec {
    PlatformKind kind = PlatformKind::cgra_grid;
    double throughput_floor_gpps = 1.0;
    double latency_ceiling_ns = 500.0;
    CgraResources cgra;  // meaningful when kind == cgra_grid
    MatResources mat;    // meaningful when kind == mat_pipeline

    bool operator==(const PlatformSpec&) const = default;
};

enum class ScheduleOp { leaf, seq, par };

/// Composition schedule tree. Nodes live in an arena so the value has plain
/// copy semantics; equality is structural.
struct ScheduleExpr {
    struct Node {
        ScheduleOp op = ScheduleOp::leaf;
        std::string model;  // leaf only
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;
    int root = -1;

    bool empty() const { return root < 0; }

    static ScheduleExpr leaf(const std::string& name);
    static ScheduleExpr seq(const ScheduleExpr& a, const ScheduleExpr& b);
    static ScheduleExpr par(const ScheduleExpr& a, const ScheduleExpr& b);

    /// In-order model names (left to right).
    std::vector<std::string> leaf_names() const;
    std::string to_string() const;

    bool operator==(const ScheduleExpr& other) const;
};

/// Grammar:  expr := term ('>' term)* ; term := atom ('|' atom)* ;
/// atom := name | '(' expr ')'.  '|' binds tighter than '>', '>' is
/// left-associative. Every leaf must name a declared model, once.
ScheduleExpr parse_schedule(const std::string& text, const std::vector<std::string>& models);

struct IOBinding {
    std::string producer;  // model name, or "raw" for raw packet features
    int output_index = 0;
    std::string consumer;
    int input_index = 0;

    bool operator==(const IOBinding&) const = default;
};

struct IOMapping {
    std::vector<IOBinding> bindings;
    bool operator==(const IOMapping&) const = default;
};

struct SearchSettings {
    int budget = 50;
    int doe = 10;
    std::uint64_t seed = 0;
    bool operator==(const SearchSettings&) const = default;
};

struct PipelineSpec {
    std::vector<ModelSpec> models;
    PlatformSpec platform;
    ScheduleExpr schedule;
    IOMapping io;
    SearchSettings search;

    const ModelSpec* find_model(const std::string& name) const;
    bool operator==(const PipelineSpec&) const = default;
};

/// Parse a spec file (one JSON object, keys: models, platform, schedule, io,
/// search; unknown keys are errors). Defaults: budget=50, doe=10, seed=0.
/// Throws SpecError on structural problems; semantic invariants are reported
/// by validate_spec.
PipelineSpec parse_spec(const std::string& text);

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string message;
};

/// Empty result iff every spec invariant holds. Never throws.
std::vector<Diagnostic> validate_spec(const PipelineSpec& spec);

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::error) return true;
    return false;
}

/// Inverse of parse_spec: parse(serialize(spec)) == spec.
std::string serialize_spec(const PipelineSpec& spec);

}  // namespace dpmlc
