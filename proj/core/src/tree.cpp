#include <numeric>

#include "cart.hpp"
#include "cropyield/classifiers.hpp"
#include "model_common.hpp"

namespace cropyield {

int argmax(std::span<const double> scores) noexcept {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return static_cast<int>(best);
}

std::size_t TreeModel::leaf_for(std::span<const double> x) const {
  std::size_t node = 0;
  while (!nodes[node].is_leaf()) {
    const auto& n = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                         : n.right);
  }
  return node;
}

TreeModel fit_tree(const Matrix& X, std::span<const int> y, const TreeConfig& cfg) {
  const int k = detail::check_training_data(X, y);
  std::vector<std::size_t> samples(X.rows());
  std::iota(samples.begin(), samples.end(), std::size_t{0});
  detail::GrowOptions options;
  options.max_depth = cfg.max_depth;
  options.min_samples_split = cfg.min_samples_split;
  options.min_impurity_decrease = cfg.min_impurity_decrease;
  return detail::grow_classification_tree(X, samples, y, k, options);
}

Predictions predict_tree(const TreeModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  Predictions out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto& leaf = m.nodes[m.leaf_for(X.row(i))];
    auto& pred = out[i];
    pred.scores.assign(static_cast<std::size_t>(m.n_classes), 0.0);
    for (std::size_t c = 0; c < leaf.class_counts.size(); ++c) {
      pred.scores[c] = static_cast<double>(leaf.class_counts[c]) / static_cast<double>(leaf.n_samples);
    }
    pred.label = argmax(pred.scores);
  }
  return out;
}

}  // namespace cropyield
