#pragma once

#include "dpmlc/codegen.hpp"
#include "dpmlc/composer.hpp"
#include "dpmlc/metrics.hpp"
#include "dpmlc/optimizer.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dpmlc {

/// One model's artifact bundle: program.txt, weights.q88, model.txt,
/// report.json, regret.csv under <out>/<model>/.
struct ModelBundle {
    std::string model_name;
    Algorithm algorithm = Algorithm::dnn;
    std::string configuration;
    MetricKind metric = MetricKind::f1;
    double objective = 0.0;
    bool feasible = false;
    std::vector<std::pair<std::string, double>> slacks;
    GeneratedArtifact artifact;
    std::string model_text;  // serialized float model
    std::vector<TracePoint> trace;
};

nlohmann::json resources_json(const ResourceReport& r);
nlohmann::json perf_json(const PerfReport& p);
nlohmann::json verdict_json(bool feasible, const std::vector<std::pair<std::string, double>>& slacks);

/// report.json body for one model (without the integrity section).
nlohmann::json model_report_json(const ModelBundle& b);

/// Adds an "integrity" section hashing the report body and the sibling
/// artifact files, then writes everything under dir (created if needed).
void write_model_bundle(const std::string& dir, const ModelBundle& b);

struct CompositionReport {
    ComposedPipeline composed;
    std::optional<nlohmann::json> fusion;  // present when a fusion plan applied
};

/// Top-level report.json for a compile run: per-model summaries plus the
/// composition section mirroring the schedule tree.
nlohmann::json bundle_report_json(const std::string& spec_hash, std::uint64_t seed,
                                  const std::vector<ModelBundle>& models,
                                  const std::optional<CompositionReport>& composition);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Recomputes the integrity hashes of a model bundle directory.
/// Returns an empty string on success, else a description of the mismatch.
std::string verify_model_bundle(const std::string& dir);

void ensure_dir(const std::string& dir);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace dpmlc
