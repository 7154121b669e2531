#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropyield/ingest.hpp"
#include "cropyield/matrix.hpp"

namespace cropyield {

/// The Gaussian-distributed columns, in this order. Yield is derived as
/// production / area.
inline constexpr std::array<NumericField, 5> kSynthFields = {
    NumericField::Area, NumericField::Production, NumericField::AnnualRainfall,
    NumericField::Fertilizer, NumericField::Pesticide};

struct Gaussian {
  double mean = 0.0;
  double std = 1.0;
};

using ClassFeatures = std::array<Gaussian, kSynthFields.size()>;

struct SynthSpec {
  std::size_t n_samples = 1000;
  std::vector<double> weights;          // one per class, summing to 1
  std::vector<ClassFeatures> features;  // one per class
  std::size_t crop_vocab = 5;
  std::size_t season_vocab = 3;
  std::size_t state_vocab = 4;
  int year_min = 1997;
  int year_max = 2020;
  std::uint64_t seed = 42;

  int n_classes() const noexcept { return static_cast<int>(weights.size()); }
};

/// Throws Error(InvalidSpec) when weights do not sum to 1, a weight is
/// negative, a std is not positive, a vocabulary is empty, or a class puts
/// almost no mass on positive values (rejection would not terminate).
void check_spec(const SynthSpec& spec);

struct SynthData {
  Dataset dataset;
  LabelVector labels;  // generating class per record
};

/// Every sample draws from its own substream, so the output depends only on
/// the seed. Each feature is redrawn until positive, which makes the
/// class-conditional law a Gaussian truncated to (0, inf).
SynthData generate(const SynthSpec& spec);

struct BayesEstimate {
  double accuracy = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo accuracy of the exact Bayes rule under the synthetic generative
/// model (truncated Gaussians included). Throws Error(InvalidSpec).
BayesEstimate bayes_optimal_accuracy(const SynthSpec& spec, std::size_t n_mc, std::uint64_t seed);

/// Log of w_c times the class-conditional density, per class.
std::vector<double> log_joint(const SynthSpec& spec, std::span<const double> x);

/// JSON layout:
///   {"n_samples": n, "seed": s, "weights": [...],
///    "classes": [{"area": {"mean": m, "std": s}, ...}, ...],
///    "vocab": {"crop": n, "season": n, "state": n},
///    "years": [min, max]}
/// Missing optional keys keep their defaults. Throws Error(InvalidSpec).
SynthSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SynthSpec& spec);

/// Sidecar document: the generator spec plus the generating labels.
nlohmann::ordered_json truth_json(const SynthSpec& spec, const LabelVector& labels);

}  // namespace cropyield
