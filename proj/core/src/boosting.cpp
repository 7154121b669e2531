#include <algorithm>
#include <cmath>
#include <numeric>

#include "cart.hpp"
#include "cropyield/classifiers.hpp"
#include "model_common.hpp"

namespace cropyield {

namespace {

constexpr double kHessianFloor = 1e-12;
constexpr double kRateClamp = 1e-12;

double sigmoid(double f) {
  if (f >= 0.0) return 1.0 / (1.0 + std::exp(-f));
  const double e = std::exp(f);
  return e / (1.0 + e);
}

// log(1 + e^f) without overflow.
double softplus(double f) {
  return f > 0.0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
}

std::vector<int> one_vs_rest(std::span<const int> y, int c) {
  std::vector<int> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t[i] = y[i] == c ? 1 : 0;
  return t;
}

}  // namespace

double boosting_loss(std::span<const double> scores, std::span<const int> targets) {
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    loss += softplus(scores[i]) - static_cast<double>(targets[i]) * scores[i];
  }
  return loss;
}

std::vector<double> boosting_gradient(std::span<const double> scores, std::span<const int> targets) {
  std::vector<double> g(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) g[i] = sigmoid(scores[i]) - targets[i];
  return g;
}

std::vector<double> boosting_hessian(std::span<const double> scores) {
  std::vector<double> h(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = sigmoid(scores[i]);
    h[i] = p * (1.0 - p);
  }
  return h;
}

BoostingModel fit_boosting(const Matrix& X, std::span<const int> y, const BoostingConfig& cfg) {
  const int k = detail::check_training_data(X, y);
  detail::require_two_classes(y, k, "gradient boosting");
  const std::size_t n = X.rows();

  BoostingModel m;
  m.n_features = X.cols();
  m.n_classes = k;
  m.learning_rate = cfg.learning_rate;
  m.initial_scores.resize(static_cast<std::size_t>(k));
  m.rounds.resize(static_cast<std::size_t>(k));

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  detail::GrowOptions options;
  options.max_depth = cfg.tree_depth;
  options.min_samples_split = 2;

  for (int c = 0; c < k; ++c) {
    const auto targets = one_vs_rest(y, c);
    const double positives = std::accumulate(targets.begin(), targets.end(), 0.0);
    const double rate = std::clamp(positives / static_cast<double>(n), kRateClamp, 1.0 - kRateClamp);
    const double f0 = std::log(rate / (1.0 - rate));
    m.initial_scores[static_cast<std::size_t>(c)] = f0;

    std::vector<double> scores(n, f0);
    std::vector<double> residual(n);
    auto& rounds = m.rounds[static_cast<std::size_t>(c)];
    rounds.reserve(cfg.n_rounds);
    for (std::size_t r = 0; r < cfg.n_rounds; ++r) {
      const auto g = boosting_gradient(scores, targets);
      const auto h = boosting_hessian(scores);
      for (std::size_t i = 0; i < n; ++i) residual[i] = -g[i];

      auto grown = detail::grow_regression_tree(X, all, residual, options);
      for (std::size_t node = 0; node < grown.tree.nodes.size(); ++node) {
        auto& leaf = grown.tree.nodes[node];
        if (!leaf.is_leaf()) continue;
        double sum_g = 0.0, sum_h = 0.0;
        for (auto i : grown.leaf_samples[node]) {
          sum_g += residual[i];
          sum_h += h[i];
        }
        leaf.value = sum_g / std::max(sum_h, kHessianFloor);
        for (auto i : grown.leaf_samples[node]) scores[i] += cfg.learning_rate * leaf.value;
      }
      rounds.push_back(std::move(grown.tree));
    }
  }
  return m;
}

namespace {

double class_score(const BoostingModel& m, std::size_t c, std::span<const double> x, std::size_t n_rounds) {
  double s = m.initial_scores[c];
  for (std::size_t r = 0; r < n_rounds; ++r) {
    const auto& tree = m.rounds[c][r];
    s += m.learning_rate * tree.nodes[tree.leaf_for(x)].value;
  }
  return s;
}

}  // namespace

Predictions predict_boosting(const BoostingModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  Predictions out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto& pred = out[i];
    pred.scores.resize(static_cast<std::size_t>(m.n_classes));
    for (std::size_t c = 0; c < pred.scores.size(); ++c) {
      pred.scores[c] = class_score(m, c, X.row(i), m.rounds[c].size());
    }
    pred.label = argmax(pred.scores);
  }
  return out;
}

std::vector<std::vector<double>> boosting_loss_trace(const BoostingModel& m, const Matrix& X,
                                                     std::span<const int> y) {
  detail::check_columns(m.n_features, X);
  std::vector<std::vector<double>> trace(static_cast<std::size_t>(m.n_classes));
  for (std::size_t c = 0; c < trace.size(); ++c) {
    const auto targets = one_vs_rest(y, static_cast<int>(c));
    std::vector<double> scores(X.rows(), m.initial_scores[c]);
    trace[c].push_back(boosting_loss(scores, targets));
    for (const auto& tree : m.rounds[c]) {
      for (std::size_t i = 0; i < X.rows(); ++i) {
        scores[i] += m.learning_rate * tree.nodes[tree.leaf_for(X.row(i))].value;
      }
      trace[c].push_back(boosting_loss(scores, targets));
    }
  }
  return trace;
}

}  // namespace cropyield
