#include <algorithm>
#include <cmath>

#include "cropyield/classifiers.hpp"
#include "model_common.hpp"

namespace cropyield {

namespace {

// Class probabilities for every sample under weights W.
Matrix probabilities(const Matrix& W, const Matrix& X) {
  const auto kc = W.rows();
  Matrix P(X.rows(), kc);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto row = P.row(i);
    for (std::size_t c = 0; c < kc; ++c) row[c] = detail::affine(W.row(c), X.row(i));
    detail::softmax(row);
  }
  return P;
}

void check_weights(const Matrix& W, const Matrix& X, std::span<const int> y) {
  if (W.cols() != X.cols() + 1 || X.rows() != y.size()) {
    throw Error(Errc::DimensionMismatch, "weight, feature and label shapes disagree");
  }
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= W.rows()) {
      throw Error(Errc::LabelOutOfRange, "label outside weight rows");
    }
  }
}

}  // namespace

double logistic_objective(const Matrix& W, const Matrix& X, std::span<const int> y, double l2) {
  check_weights(W, X, y);
  const std::size_t p = X.cols();
  double loss = 0.0;
  std::vector<double> z(W.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t c = 0; c < W.rows(); ++c) z[c] = detail::affine(W.row(c), X.row(i));
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - m);
    loss += m + std::log(sum) - z[static_cast<std::size_t>(y[i])];
  }
  loss /= static_cast<double>(X.rows());
  double penalty = 0.0;
  for (std::size_t c = 0; c < W.rows(); ++c) {
    for (std::size_t j = 0; j < p; ++j) penalty += W(c, j) * W(c, j);
  }
  return loss + 0.5 * l2 * penalty;
}

Matrix logistic_gradient(const Matrix& W, const Matrix& X, std::span<const int> y, double l2) {
  check_weights(W, X, y);
  const std::size_t p = X.cols();
  const auto P = probabilities(W, X);
  Matrix G(W.rows(), p + 1);
  const double inv_n = 1.0 / static_cast<double>(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto x = X.row(i);
    for (std::size_t c = 0; c < W.rows(); ++c) {
      const double r = P(i, c) - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0);
      auto g = G.row(c);
      for (std::size_t j = 0; j < p; ++j) g[j] += r * x[j];
      g[p] += r;
    }
  }
  for (std::size_t c = 0; c < W.rows(); ++c) {
    for (std::size_t j = 0; j <= p; ++j) {
      G(c, j) *= inv_n;
      if (j < p) G(c, j) += l2 * W(c, j);
    }
  }
  return G;
}

LogisticModel fit_logistic(const Matrix& X, std::span<const int> y, const LogisticConfig& cfg) {
  const int k = detail::check_training_data(X, y);
  detail::require_two_classes(y, k, "logistic regression");

  LogisticModel m;
  m.n_features = X.cols();
  m.n_classes = k;
  m.weights = Matrix(static_cast<std::size_t>(k), X.cols() + 1);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const auto G = logistic_gradient(m.weights, X, y, cfg.l2_penalty);
    double max_abs = 0.0;
    for (double g : G.data()) max_abs = std::max(max_abs, std::abs(g));
    if (max_abs < cfg.tolerance) break;
    for (std::size_t c = 0; c < G.rows(); ++c) {
      for (std::size_t j = 0; j < G.cols(); ++j) m.weights(c, j) -= cfg.learning_rate * G(c, j);
    }
    m.iterations = it + 1;
  }
  return m;
}

Predictions predict_logistic(const LogisticModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  const auto P = probabilities(m.weights, X);
  Predictions out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto row = P.row(i);
    out[i].scores.assign(row.begin(), row.end());
    out[i].label = argmax(out[i].scores);
  }
  return out;
}

}  // namespace cropyield
