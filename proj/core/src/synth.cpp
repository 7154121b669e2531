#include "cropyield/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cropyield/error.hpp"
#include "cropyield/rng.hpp"

namespace cropyield {

namespace {

// Smallest acceptance probability we are willing to reject-sample against.
constexpr double kMinAcceptance = 1e-6;

double log_acceptance(const Gaussian& g) {
  // P(X > 0) for X ~ N(mean, std).
  return std::log(0.5 * std::erfc(-g.mean / (g.std * std::sqrt(2.0))));
}

int draw_class(const SynthSpec& spec, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int c = 0; c < spec.n_classes(); ++c) {
    acc += spec.weights[static_cast<std::size_t>(c)];
    if (u < acc) return c;
  }
  // Rounding left a sliver above the last cumulative weight.
  for (int c = spec.n_classes() - 1; c >= 0; --c) {
    if (spec.weights[static_cast<std::size_t>(c)] > 0.0) return c;
  }
  return 0;
}

double draw_positive(const Gaussian& g, Rng& rng) {
  for (;;) {
    const double v = rng.normal(g.mean, g.std);
    if (v > 0.0) return v;
  }
}

std::array<double, kSynthFields.size()> draw_features(const SynthSpec& spec, int c, Rng& rng) {
  std::array<double, kSynthFields.size()> x{};
  const auto& cf = spec.features[static_cast<std::size_t>(c)];
  for (std::size_t f = 0; f < x.size(); ++f) x[f] = draw_positive(cf[f], rng);
  return x;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidSpec, what); }

}  // namespace

void check_spec(const SynthSpec& spec) {
  if (spec.weights.empty()) invalid("at least one class is required");
  if (spec.features.size() != spec.weights.size()) {
    invalid("got " + std::to_string(spec.weights.size()) + " weights but " +
            std::to_string(spec.features.size()) + " class distributions");
  }
  double total = 0.0;
  for (double w : spec.weights) {
    if (!std::isfinite(w) || w < 0.0) invalid("class weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) invalid("class weights sum to " + std::to_string(total) + ", not 1");
  for (std::size_t c = 0; c < spec.features.size(); ++c) {
    for (std::size_t f = 0; f < kSynthFields.size(); ++f) {
      const auto& g = spec.features[c][f];
      const std::string where =
          "class " + std::to_string(c) + " " + std::string(field_key(kSynthFields[f]));
      if (!std::isfinite(g.mean) || !std::isfinite(g.std) || g.std <= 0.0) {
        invalid(where + ": std must be positive and finite");
      }
      if (log_acceptance(g) < std::log(kMinAcceptance)) {
        invalid(where + ": almost no mass above zero");
      }
    }
  }
  if (spec.crop_vocab < 1 || spec.season_vocab < 1 || spec.state_vocab < 1) {
    invalid("vocabulary sizes must be at least 1");
  }
  if (spec.year_min > spec.year_max) invalid("year range is empty");
}

SynthData generate(const SynthSpec& spec) {
  check_spec(spec);
  SynthData out;
  out.dataset.records.reserve(spec.n_samples);
  out.labels.reserve(spec.n_samples);
  const auto years = static_cast<std::uint64_t>(spec.year_max - spec.year_min + 1);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    Rng rng(spec.seed, "synth", i);
    const int c = draw_class(spec, rng);
    Record r;
    r.crop = "Crop_" + std::to_string(rng.below(spec.crop_vocab) + 1);
    r.season = "Season_" + std::to_string(rng.below(spec.season_vocab) + 1);
    r.state = "State_" + std::to_string(rng.below(spec.state_vocab) + 1);
    r.crop_year = spec.year_min + static_cast<int>(rng.below(years));
    const auto x = draw_features(spec, c, rng);
    r.area = x[0];
    r.production = x[1];
    r.annual_rainfall = x[2];
    r.fertilizer = x[3];
    r.pesticide = x[4];
    r.yield_value = r.production / r.area;
    out.dataset.records.push_back(std::move(r));
    out.labels.push_back(c);
  }
  return out;
}

std::vector<double> log_joint(const SynthSpec& spec, std::span<const double> x) {
  static const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
  std::vector<double> out(spec.weights.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (spec.weights[c] <= 0.0) {
      out[c] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double s = std::log(spec.weights[c]);
    for (std::size_t f = 0; f < kSynthFields.size(); ++f) {
      const auto& g = spec.features[c][f];
      const double z = (x[f] - g.mean) / g.std;
      s += -kLogSqrt2Pi - std::log(g.std) - 0.5 * z * z - log_acceptance(g);
    }
    out[c] = s;
  }
  return out;
}

BayesEstimate bayes_optimal_accuracy(const SynthSpec& spec, std::size_t n_mc, std::uint64_t seed) {
  check_spec(spec);
  if (n_mc < 1) invalid("n_mc must be at least 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    Rng rng(seed, "bayes", i);
    const int c = draw_class(spec, rng);
    const auto x = draw_features(spec, c, rng);
    const auto lj = log_joint(spec, x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < lj.size(); ++k) {
      if (lj[k] > lj[best]) best = k;
    }
    if (static_cast<int>(best) == c) ++hits;
  }
  BayesEstimate e;
  const double n = static_cast<double>(n_mc);
  e.accuracy = static_cast<double>(hits) / n;
  e.std_error = std::sqrt(e.accuracy * (1.0 - e.accuracy) / n);
  return e;
}

SynthSpec spec_from_json(const nlohmann::json& j) {
  SynthSpec spec;
  try {
    if (!j.is_object()) invalid("spec must be a JSON object");
    if (j.contains("n_samples")) spec.n_samples = j.at("n_samples").get<std::size_t>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    spec.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& cls : j.at("classes")) {
      ClassFeatures cf;
      for (std::size_t f = 0; f < kSynthFields.size(); ++f) {
        const auto& g = cls.at(std::string(field_key(kSynthFields[f])));
        cf[f] = {g.at("mean").get<double>(), g.at("std").get<double>()};
      }
      spec.features.push_back(cf);
    }
    if (j.contains("vocab")) {
      const auto& v = j.at("vocab");
      if (v.contains("crop")) spec.crop_vocab = v.at("crop").get<std::size_t>();
      if (v.contains("season")) spec.season_vocab = v.at("season").get<std::size_t>();
      if (v.contains("state")) spec.state_vocab = v.at("state").get<std::size_t>();
    }
    if (j.contains("years")) {
      const auto y = j.at("years").get<std::vector<int>>();
      if (y.size() != 2) invalid("years must be [min, max]");
      spec.year_min = y[0];
      spec.year_max = y[1];
    }
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("malformed spec: ") + e.what());
  }
  check_spec(spec);
  return spec;
}

nlohmann::ordered_json to_json(const SynthSpec& spec) {
  nlohmann::ordered_json j;
  j["n_samples"] = spec.n_samples;
  j["seed"] = spec.seed;
  j["weights"] = spec.weights;
  j["classes"] = nlohmann::ordered_json::array();
  for (const auto& cf : spec.features) {
    nlohmann::ordered_json cls;
    for (std::size_t f = 0; f < kSynthFields.size(); ++f) {
      cls[std::string(field_key(kSynthFields[f]))] = {{"mean", cf[f].mean}, {"std", cf[f].std}};
    }
    j["classes"].push_back(std::move(cls));
  }
  j["vocab"] = {{"crop", spec.crop_vocab}, {"season", spec.season_vocab}, {"state", spec.state_vocab}};
  j["years"] = {spec.year_min, spec.year_max};
  return j;
}

nlohmann::ordered_json truth_json(const SynthSpec& spec, const LabelVector& labels) {
  nlohmann::ordered_json j;
  j["spec"] = to_json(spec);
  j["labels"] = labels;
  return j;
}

}  // namespace cropyield
