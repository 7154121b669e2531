#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cropyield/ingest.hpp"
#include "cropyield/matrix.hpp"
#include "cropyield/stats.hpp"

namespace cropyield {

/// Display names for K in {2, 4}, ascending yield order.
std::vector<std::string> class_names(int k);

struct NormalizedDataset {
  Dataset base;
  std::vector<double> normalized_yield;  // per record, in [0, 1]
  std::optional<LabelVector> labels;     // set by label_yield_classes
  int n_classes = 0;                     // 0 until labelled
};

/// Per-crop min-max scaling of the yield column. Groups whose yields are all
/// equal (including singletons) map to 0.5.
NormalizedDataset normalize_yield_per_crop(const Dataset& d);

struct LabelOptions {
  int k = 4;
  bool per_crop = false;  // thresholds per crop group instead of global
};

/// Quantile thresholds at p = 1/k, ..., (k-1)/k over the normalized yields;
/// a record's class is the number of thresholds strictly below its value.
/// Throws Error(TooFewSamples) when n < k, Error(InvalidConfig) for k not in {2, 4}.
NormalizedDataset label_yield_classes(NormalizedDataset nd, const LabelOptions& options);

/// The thresholds used by label_yield_classes for a vector of normalized yields.
std::vector<double> class_thresholds(std::span<const double> normalized, int k);

/// CSV columns plus `yield_norm` and `yield_class_int`.
std::string to_csv(const NormalizedDataset& nd);

/// Feature selection. Numeric names select one column each; categorical names
/// ("crop", "season", "state") expand to one-hot blocks over the sorted
/// distinct values present in the dataset.
struct FeatureSpec {
  std::vector<std::string> features = {"area", "production", "annual_rainfall", "fertilizer",
                                       "pesticide"};
};

struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> column_names;
};

/// Throws Error(UnknownFeature).
FeatureMatrix build_feature_matrix(const Dataset& d, const FeatureSpec& spec = {});

struct Scaler {
  std::vector<double> min;
  std::vector<double> max;
};

/// Per-column min and max of the training rows. Throws Error(EmptyInput).
Scaler fit_scaler(const Matrix& train);

/// (x - min) / (max - min), clamped to [0, 1]; constant columns map to 0.5.
Matrix apply_scaler(const Scaler& s, const Matrix& m);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Seeded train/test partition of 0..labels.size()-1. |train| is
/// round(train_fraction * n); in stratified mode each class is rounded on
/// its own and the total is reconciled by adjusting the largest classes.
SplitIndices split(std::span<const int> labels, const SplitSpec& spec);

}  // namespace cropyield
