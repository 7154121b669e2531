#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "cropyield/classifiers.hpp"
#include "cropyield/error.hpp"

namespace cropyield::detail {

/// Checks shape agreement and label range; returns K = max(y) + 1.
inline int check_training_data(const Matrix& X, std::span<const int> y) {
  if (X.rows() != y.size()) {
    throw Error(Errc::DimensionMismatch, std::to_string(X.rows()) + " rows but " +
                                             std::to_string(y.size()) + " labels");
  }
  if (X.rows() == 0) throw Error(Errc::TooFewSamples, "no training samples");
  int k = 0;
  for (int label : y) {
    if (label < 0) throw Error(Errc::LabelOutOfRange, "negative class label");
    k = std::max(k, label + 1);
  }
  return k;
}

inline std::size_t distinct_classes(std::span<const int> y, int k) {
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  std::size_t count = 0;
  for (int label : y) {
    if (!seen[static_cast<std::size_t>(label)]) {
      seen[static_cast<std::size_t>(label)] = true;
      ++count;
    }
  }
  return count;
}

inline void require_two_classes(std::span<const int> y, int k, std::string_view model) {
  if (distinct_classes(y, k) < 2) {
    throw Error(Errc::SingleClass, std::string(model) + " needs at least two classes in training data");
  }
}

inline void check_columns(std::size_t expected, const Matrix& X) {
  if (X.cols() != expected) {
    throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(expected) +
                                             " features, got " + std::to_string(X.cols()));
  }
}

/// In-place softmax with the max-subtraction guard.
inline void softmax(std::span<double> z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

/// w . [x, 1] for a weight row whose last entry is the bias.
inline double affine(std::span<const double> w, std::span<const double> x) {
  double s = w[x.size()];
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

}  // namespace cropyield::detail
