#pragma once

// Greedy binary tree growth shared by the classification tree, the forest
// and the boosting regression trees.

#include <cstddef>
#include <span>
#include <vector>

#include "cropyield/classifiers.hpp"
#include "cropyield/matrix.hpp"
#include "cropyield/rng.hpp"

namespace cropyield::detail {

struct GrowOptions {
  int max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_split = 2;
  double min_impurity_decrease = 0.0;
  std::size_t features_per_split = 0;  // 0 or >= p: every feature at every node
  Rng* rng = nullptr;                  // required when subsampling features
};

/// Gini-split tree over `samples` (duplicates allowed, as in a bootstrap).
/// Leaves carry class counts.
TreeModel grow_classification_tree(const Matrix& X, std::span<const std::size_t> samples,
                                   std::span<const int> y, int n_classes,
                                   const GrowOptions& options);

/// Variance-reduction tree. Leaf values are left at zero; `leaf_samples[node]`
/// lists the samples that reached each leaf so the caller can fit them.
struct RegressionTree {
  TreeModel tree;
  std::vector<std::vector<std::size_t>> leaf_samples;
};

RegressionTree grow_regression_tree(const Matrix& X, std::span<const std::size_t> samples,
                                    std::span<const double> targets, const GrowOptions& options);

}  // namespace cropyield::detail
