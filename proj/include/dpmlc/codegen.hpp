#pragma once

#include "dpmlc/fixed_point.hpp"
#include "dpmlc/kmeans.hpp"
#include "dpmlc/mlp.hpp"
#include "dpmlc/svm.hpp"
#include "dpmlc/targets.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpmlc {

/// A model parameter fell outside the fixed-point range. The message names
/// the offending weight.
struct QuantizationError : std::runtime_error {
    explicit QuantizationError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ProgramKind { cgra_mlp, mat_kmeans, mat_svm };

std::string to_string(ProgramKind k);

/// Emitted backend program plus everything needed to reproduce and audit it.
/// program_text alone is executable by the reference interpreter; the charged
/// resources always equal the corresponding cost-model estimate.
struct GeneratedArtifact {
    ProgramKind kind = ProgramKind::cgra_mlp;
    FixedFormat format;
    std::string program_text;
    std::vector<std::int32_t> weights_raw;  // scaled fixed-point parameters, emission order
    ResourceReport resources;
    PerfReport perf;
    // provenance (filled by the driver)
    std::string spec_hash;
    std::uint64_t seed = 0;
    std::string configuration;
};

/// Loop-nest map/reduce program for the grid: per layer an outer map over
/// neurons, an inner map(mul)+reduce(add) over lane-sized input chunks, bias,
/// activation, and a double-buffered store. Weights are embedded as a
/// fixed-point table. Throws QuantizationError when a parameter exceeds the
/// format's range.
GeneratedArtifact emit_cgra_mlp(const MlpModel& model, const CgraTarget& target,
                                FixedFormat format = {});

/// One match-action table per cluster: the axis-aligned box whose bounds are
/// midpoints between the centroid's coordinate and its nearest neighboring
/// centroid coordinate per feature, first-match-wins, with a default action
/// assigning unmatched inputs to the cluster with the largest box.
GeneratedArtifact emit_mat_kmeans(const KMeansModel& model, const MatTarget& target,
                                  FixedFormat format = {});

struct FeatureRange {
    double lo = 0.0, hi = 0.0;
};

/// Per-feature train-split value ranges, used to bucket SVM score tables.
std::vector<FeatureRange> train_feature_ranges(const Dataset& data,
                                               const std::vector<int>& features);

inline constexpr int kSvmBuckets = 16;

/// One table per kept feature: 16 value buckets spanning the train range,
/// each contributing the bucket-midpoint partial score w_i * mid in fixed
/// point; the program sums contributions plus bias and thresholds at 0.
GeneratedArtifact emit_mat_svm(const SvmModel& model, const std::vector<FeatureRange>& ranges,
                               const MatTarget& target, FixedFormat format = {});

/// Little-endian serialization of weights_raw: int16 for formats up to 16
/// bits, int32 otherwise.
std::vector<std::uint8_t> weights_blob(const GeneratedArtifact& artifact);

}  // namespace dpmlc
