#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cropyield/classifiers.hpp"

namespace cropyield {

/// Everything a run depends on. The grammar of the text form is described
/// in docs/config.md.
struct RunConfig {
  std::string input;
  std::string outdir = "out";
  std::uint64_t seed = 42;
  int classes = 4;
  double train_fraction = 0.8;
  bool stratified = true;
  bool per_crop_quartiles = false;
  std::vector<std::string> features = {"area", "production", "annual_rainfall", "fertilizer",
                                       "pesticide"};
  std::vector<ModelKind> models = {std::begin(kAllModelKinds), std::end(kAllModelKinds)};
  bool parallel = false;
  bool strict = false;
  bool drop_invalid = false;
  std::size_t max_scatter_points = 2000;
  ModelConfig model{};
};

/// Applies one `key = value` setting. Throws Error(InvalidConfig) for an
/// unknown key or a value of the wrong shape.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses a config file's text on top of the defaults. Errors name the line.
RunConfig parse_config(std::string_view text);
RunConfig read_config(const std::string& path);

/// Cross-field checks (class count, fraction range, empty lists). Throws
/// Error(InvalidConfig).
void check_config(const RunConfig& cfg);

/// Every key with its resolved value, one per line in a fixed order. The
/// output directory is left out so that runs into different directories
/// echo identical text.
std::string to_text(const RunConfig& cfg);

}  // namespace cropyield
