#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cropyield/ingest.hpp"
#include "cropyield/matrix.hpp"
#include "cropyield/rng.hpp"
#include "cropyield/synth.hpp"

namespace fixtures {

inline constexpr const char* kHeader =
    "Crop,Crop_Year,Season,State,Area,Production,Annual_Rainfall,Fertilizer,Pesticide,Yield\n";

inline cropyield::Record record(std::string crop, double yield, double area = 10.0,
                                double pesticide = 1.0, int year = 2000) {
  cropyield::Record r;
  r.crop = std::move(crop);
  r.crop_year = year;
  r.season = "Kharif";
  r.state = "Assam";
  r.area = area;
  r.production = yield * area;
  r.annual_rainfall = 1200.0;
  r.fertilizer = 50.0;
  r.pesticide = pesticide;
  r.yield_value = yield;
  return r;
}

inline cropyield::Dataset dataset(std::vector<cropyield::Record> records) {
  cropyield::Dataset d;
  d.records = std::move(records);
  return d;
}

struct Labelled {
  cropyield::Matrix X;
  cropyield::LabelVector y;
};

/// Isotropic Gaussian blobs; class c is centred at `separation * c` on every axis.
inline Labelled blobs(std::size_t n, std::size_t p, int k, double separation, std::uint64_t seed) {
  cropyield::Rng rng(seed);
  Labelled out{cropyield::Matrix(n, p), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(k));
    out.y.push_back(c);
    for (std::size_t j = 0; j < p; ++j) out.X(i, j) = separation * c + rng.normal();
  }
  return out;
}

/// Four well separated classes over the five synthetic columns.
inline cropyield::SynthSpec four_class_spec(std::size_t n, std::uint64_t seed, double step = 1.8) {
  cropyield::SynthSpec s;
  s.n_samples = n;
  s.seed = seed;
  s.weights = {0.25, 0.25, 0.25, 0.25};
  const double base_mean[5] = {5000, 20000, 1400, 200000, 500};
  const double base_std[5] = {1000, 4000, 250, 40000, 100};
  for (int c = 0; c < 4; ++c) {
    cropyield::ClassFeatures cf;
    for (std::size_t f = 0; f < 5; ++f) cf[f] = {base_mean[f] + step * c * base_std[f], base_std[f]};
    s.features.push_back(cf);
  }
  s.crop_vocab = 6;
  s.season_vocab = 3;
  s.state_vocab = 4;
  return s;
}

/// A fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cropyield_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace fixtures
