#include <cmath>
#include <limits>

#include "cropyield/classifiers.hpp"
#include "model_common.hpp"

namespace cropyield {

namespace {
constexpr double kAbsoluteVarianceFloor = 1e-12;
}

NaiveBayesModel fit_naive_bayes(const Matrix& X, std::span<const int> y, const NaiveBayesConfig& cfg) {
  const int k = detail::check_training_data(X, y);
  const std::size_t p = X.cols();
  const auto kc = static_cast<std::size_t>(k);

  NaiveBayesModel m;
  m.n_features = p;
  m.n_classes = k;
  m.priors.assign(kc, 0.0);
  m.means = Matrix(kc, p);
  m.variances = Matrix(kc, p);

  std::vector<double> counts(kc, 0.0);
  std::vector<double> global_mean(p, 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    counts[c] += 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      m.means(c, j) += X(i, j);
      global_mean[j] += X(i, j);
    }
  }
  const auto n = static_cast<double>(X.rows());
  for (std::size_t c = 0; c < kc; ++c) {
    m.priors[c] = counts[c] / n;
    if (counts[c] == 0.0) continue;
    for (std::size_t j = 0; j < p; ++j) m.means(c, j) /= counts[c];
  }
  for (auto& g : global_mean) g /= n;

  std::vector<double> global_var(p, 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (std::size_t j = 0; j < p; ++j) {
      const double d = X(i, j) - m.means(c, j);
      m.variances(c, j) += d * d;
      const double g = X(i, j) - global_mean[j];
      global_var[j] += g * g;
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    global_var[j] /= n;
    if (global_var[j] == 0.0) m.degenerate_features.push_back(j);
  }
  for (std::size_t c = 0; c < kc; ++c) {
    for (std::size_t j = 0; j < p; ++j) {
      const double var = counts[c] > 0.0 ? m.variances(c, j) / counts[c] : 0.0;
      m.variances(c, j) =
          std::max({var, cfg.variance_floor_rel * global_var[j], kAbsoluteVarianceFloor});
    }
  }
  return m;
}

Predictions predict_naive_bayes(const NaiveBayesModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  const auto kc = static_cast<std::size_t>(m.n_classes);
  constexpr double kLogTwoPi = 1.8378770664093454835606594728112;  // log(2 pi)
  Predictions out(X.rows());
  std::vector<double> log_score(kc);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto x = X.row(i);
    for (std::size_t c = 0; c < kc; ++c) {
      if (m.priors[c] <= 0.0) {
        log_score[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double s = std::log(m.priors[c]);
      for (std::size_t j = 0; j < m.n_features; ++j) {
        const double var = m.variances(c, j);
        const double d = x[j] - m.means(c, j);
        s -= 0.5 * (kLogTwoPi + std::log(var) + d * d / var);
      }
      log_score[c] = s;
    }
    auto& pred = out[i];
    pred.scores = log_score;
    detail::softmax(pred.scores);
    pred.label = argmax(pred.scores);
  }
  return out;
}

}  // namespace cropyield
