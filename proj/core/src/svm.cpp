#include <numeric>

#include "cropyield/classifiers.hpp"
#include "cropyield/rng.hpp"
#include "model_common.hpp"

namespace cropyield {

SvmModel fit_svm(const Matrix& X, std::span<const int> y, const SvmConfig& cfg, std::uint64_t seed) {
  const int k = detail::check_training_data(X, y);
  detail::require_two_classes(y, k, "svm");
  if (!(cfg.l2_penalty > 0.0)) throw Error(Errc::InvalidConfig, "svm.l2_penalty must be > 0");

  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  SvmModel m;
  m.n_features = p;
  m.n_classes = k;
  m.weights = Matrix(static_cast<std::size_t>(k), p + 1);

  // One visiting order per epoch, shared by the k binary problems.
  std::vector<std::vector<std::size_t>> orders(cfg.epochs, std::vector<std::size_t>(n));
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    std::iota(orders[e].begin(), orders[e].end(), std::size_t{0});
    Rng rng(seed, "svm", e);
    rng.shuffle(std::span(orders[e]));
  }

  for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
    auto w = m.weights.row(c);
    std::size_t t = 0;
    for (const auto& order : orders) {
      for (auto i : order) {
        ++t;
        const double eta = 1.0 / (cfg.l2_penalty * static_cast<double>(t));
        const double target = static_cast<std::size_t>(y[i]) == c ? 1.0 : -1.0;
        const auto x = X.row(i);
        const double margin = target * detail::affine(w, x);
        const double shrink = 1.0 - eta * cfg.l2_penalty;
        for (auto& v : w) v *= shrink;
        if (margin < 1.0) {
          for (std::size_t j = 0; j < p; ++j) w[j] += eta * target * x[j];
          w[p] += eta * target;
        }
      }
    }
  }
  return m;
}

Predictions predict_svm(const SvmModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  Predictions out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto& pred = out[i];
    pred.scores.resize(static_cast<std::size_t>(m.n_classes));
    for (std::size_t c = 0; c < pred.scores.size(); ++c) {
      pred.scores[c] = detail::affine(m.weights.row(c), X.row(i));
    }
    pred.label = argmax(pred.scores);
  }
  return out;
}

}  // namespace cropyield
