#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cropyield/matrix.hpp"

namespace oracles {

using cropyield::Matrix;

/// Direct Gaussian densities in 50-digit arithmetic.
inline std::vector<double> nb_posterior_oracle(const Matrix& X, std::span<const int> y, std::span<const double> q,
                                        double floor_rel) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const std::size_t n = X.rows(), p = X.cols();
  int k = 0;
  for (int v : y) k = std::max(k, v + 1);
  const auto kc = static_cast<std::size_t>(k);
  std::vector<Big> count(kc, 0);
  std::vector<std::vector<Big>> mean(kc, std::vector<Big>(p, 0)), var(kc, std::vector<Big>(p, 0));
  std::vector<Big> gmean(p, 0), gvar(p, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    count[c] += 1;
    for (std::size_t j = 0; j < p; ++j) {
      mean[c][j] += Big(X(i, j));
      gmean[j] += Big(X(i, j));
    }
  }
  for (std::size_t j = 0; j < p; ++j) gmean[j] /= n;
  for (std::size_t c = 0; c < kc; ++c) {
    for (std::size_t j = 0; j < p; ++j) mean[c][j] /= count[c];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (std::size_t j = 0; j < p; ++j) {
      var[c][j] += (Big(X(i, j)) - mean[c][j]) * (Big(X(i, j)) - mean[c][j]);
      gvar[j] += (Big(X(i, j)) - gmean[j]) * (Big(X(i, j)) - gmean[j]);
    }
  }
  for (std::size_t j = 0; j < p; ++j) gvar[j] /= n;
  const Big pi = boost::math::constants::pi<Big>();
  std::vector<Big> joint(kc);
  Big total = 0;
  for (std::size_t c = 0; c < kc; ++c) {
    Big density = count[c] / n;
    for (std::size_t j = 0; j < p; ++j) {
      Big v = var[c][j] / count[c];
      v = std::max({v, Big(floor_rel) * gvar[j], Big(1e-12)});
      const Big d = Big(q[j]) - mean[c][j];
      density *= exp(-d * d / (2 * v)) / sqrt(2 * pi * v);
    }
    joint[c] = density;
    total += density;
  }
  std::vector<double> out;
  for (auto& j : joint) out.push_back(static_cast<double>(j / total));
  return out;
}

/// Exhaustive k-NN: full sort by (distance, row), majority vote, vote ties to
/// the tied class whose member is nearest.
inline int knn_oracle(const Matrix& X, std::span<const int> y, std::span<const double> q, std::size_t k, int classes) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += (q[j] - X(i, j)) * (q[j] - X(i, j));
    d.emplace_back(std::sqrt(s), i);
  }
  std::sort(d.begin(), d.end());
  std::vector<int> votes(static_cast<std::size_t>(classes), 0);
  for (std::size_t r = 0; r < k; ++r) votes[static_cast<std::size_t>(y[d[r].second])]++;
  const int top = *std::max_element(votes.begin(), votes.end());
  for (std::size_t r = 0; r < k; ++r) {
    if (votes[static_cast<std::size_t>(y[d[r].second])] == top) return y[d[r].second];
  }
  return -1;
}

/// Max relative error with an absolute floor, so gradients near zero are
/// compared on an absolute scale.
inline double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

}  // namespace oracles
