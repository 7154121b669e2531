#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "cart.hpp"
#include "cropyield/classifiers.hpp"
#include "model_common.hpp"

namespace cropyield {

ForestModel fit_forest(const Matrix& X, std::span<const int> y, const ForestConfig& cfg,
                       std::uint64_t seed) {
  const int k = detail::check_training_data(X, y);
  if (cfg.n_trees == 0) throw Error(Errc::InvalidConfig, "forest needs at least one tree");
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();

  detail::GrowOptions base;
  base.max_depth = cfg.tree.max_depth;
  base.min_samples_split = cfg.tree.min_samples_split;
  base.min_impurity_decrease = cfg.tree.min_impurity_decrease;
  base.features_per_split = cfg.features_per_split == 0
                                ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))))
                                : cfg.features_per_split;

  ForestModel forest;
  forest.n_features = p;
  forest.n_classes = k;
  forest.trees.resize(cfg.n_trees);

  // Tree t depends only on (seed, t), so any schedule gives the same forest.
  auto build = [&](std::size_t t) {
    Rng rng(seed, "forest", t);
    std::vector<std::size_t> samples(n);
    if (cfg.bootstrap) {
      for (auto& s : samples) s = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    auto options = base;
    options.rng = &rng;
    forest.trees[t] = detail::grow_classification_tree(X, samples, y, k, options);
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.n_trees));
  if (threads <= 1) {
    for (std::size_t t = 0; t < cfg.n_trees; ++t) build(t);
    return forest;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t t = next++; t < cfg.n_trees; t = next++) {
        try {
          build(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
  return forest;
}

Predictions predict_forest(const ForestModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  const auto kc = static_cast<std::size_t>(m.n_classes);
  const auto n_trees = static_cast<double>(m.trees.size());
  Predictions out(X.rows());
  std::vector<double> leaf_scores(kc);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto x = X.row(i);
    auto& pred = out[i];
    pred.scores.assign(kc, 0.0);
    for (const auto& tree : m.trees) {
      const auto& leaf = tree.nodes[tree.leaf_for(x)];
      std::fill(leaf_scores.begin(), leaf_scores.end(), 0.0);
      for (std::size_t c = 0; c < leaf.class_counts.size(); ++c) {
        leaf_scores[c] = static_cast<double>(leaf.class_counts[c]);
      }
      pred.scores[static_cast<std::size_t>(argmax(leaf_scores))] += 1.0;
    }
    for (auto& s : pred.scores) s /= n_trees;
    pred.label = argmax(pred.scores);
  }
  return out;
}

}  // namespace cropyield
