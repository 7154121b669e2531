#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cropyield/classifiers.hpp"

namespace cropyield {

inline constexpr int kModelFormatVersion = 1;

/// {"format_version": 1, "kind": "<model name>", ...parameters}. Doubles are
/// written in shortest round-trip form, so a parsed model predicts exactly
/// like the original.
nlohmann::ordered_json model_to_json(const TrainedModel& m);

/// Throws Error(ModelFormat) on an unknown kind, version or malformed body.
TrainedModel model_from_json(const nlohmann::json& j);

std::string serialize_model(const TrainedModel& m);
TrainedModel parse_model(std::string_view text);

}  // namespace cropyield
