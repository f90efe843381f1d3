#pragma once

#include "dpmlc/kmeans.hpp"
#include "dpmlc/mlp.hpp"
#include "dpmlc/svm.hpp"

#include <string>
#include <variant>

namespace dpmlc {

using TrainedModel = std::variant<MlpModel, KMeansModel, SvmModel>;

/// Versioned text format: a header describing the architecture followed by a
/// flat decimal parameter array (round-trips doubles exactly).
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

long param_count(const TrainedModel& model);

}  // namespace dpmlc
