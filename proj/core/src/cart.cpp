#include "cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "cropyield/error.hpp"

namespace cropyield::detail {

namespace {

// Splits whose impurity decrease does not exceed this are treated as no-ops;
// it absorbs rounding noise on mathematically zero gains.
constexpr double kGainEpsilon = 1e-12;

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Gini bookkeeping with integer counts. With S = sum_c count_c^2 the Gini
// impurity of a side of size m is 1 - S / m^2.
class GiniCriterion {
 public:
  GiniCriterion(std::span<const int> y, int n_classes) : y_(y), k_(static_cast<std::size_t>(n_classes)) {}

  double node_impurity(std::span<const std::size_t> samples) const {
    const auto counts = class_counts(samples);
    double s = 0.0;
    for (auto c : counts) s += static_cast<double>(c) * static_cast<double>(c);
    const auto n = static_cast<double>(samples.size());
    return 1.0 - s / (n * n);
  }

  std::vector<std::size_t> class_counts(std::span<const std::size_t> samples) const {
    std::vector<std::size_t> counts(k_, 0);
    for (auto i : samples) ++counts[static_cast<std::size_t>(y_[i])];
    return counts;
  }

  void begin_scan(std::span<const std::size_t> samples) {
    left_.assign(k_, 0);
    right_ = class_counts(samples);
    n_ = samples.size();
    n_left_ = 0;
    sq_left_ = 0.0;
    sq_right_ = 0.0;
    for (auto c : right_) sq_right_ += static_cast<double>(c) * static_cast<double>(c);
  }

  void move_left(std::size_t sample) {
    const auto c = static_cast<std::size_t>(y_[sample]);
    sq_left_ += 2.0 * static_cast<double>(left_[c]) + 1.0;
    sq_right_ -= 2.0 * static_cast<double>(right_[c]) - 1.0;
    ++left_[c];
    --right_[c];
    ++n_left_;
  }

  double gain(double parent_impurity) const {
    const auto nl = static_cast<double>(n_left_);
    const auto nr = static_cast<double>(n_ - n_left_);
    const double weighted = ((nl - sq_left_ / nl) + (nr - sq_right_ / nr)) / static_cast<double>(n_);
    return parent_impurity - weighted;
  }

 private:
  std::span<const int> y_;
  std::size_t k_;
  std::vector<std::size_t> left_, right_;
  std::size_t n_ = 0, n_left_ = 0;
  double sq_left_ = 0.0, sq_right_ = 0.0;
};

// Squared-error bookkeeping. The gain uses the closed form
// SSE_parent - SSE_left - SSE_right = nl * nr / n * (mean_l - mean_r)^2,
// normalised by n, which is non-negative and free of cancellation.
class VarianceCriterion {
 public:
  explicit VarianceCriterion(std::span<const double> t) : t_(t) {}

  double node_impurity(std::span<const std::size_t> samples) const {
    double mean = 0.0;
    for (auto i : samples) mean += t_[i];
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (auto i : samples) ss += (t_[i] - mean) * (t_[i] - mean);
    return ss / static_cast<double>(samples.size());
  }

  void begin_scan(std::span<const std::size_t> samples) {
    n_ = samples.size();
    n_left_ = 0;
    sum_left_ = 0.0;
    sum_total_ = 0.0;
    for (auto i : samples) sum_total_ += t_[i];
  }

  void move_left(std::size_t sample) {
    sum_left_ += t_[sample];
    ++n_left_;
  }

  double gain(double /*parent_impurity*/) const {
    const auto nl = static_cast<double>(n_left_);
    const auto nr = static_cast<double>(n_ - n_left_);
    const auto n = static_cast<double>(n_);
    const double diff = sum_left_ / nl - (sum_total_ - sum_left_) / nr;
    return nl * nr / (n * n) * diff * diff;
  }

 private:
  std::span<const double> t_;
  std::size_t n_ = 0, n_left_ = 0;
  double sum_left_ = 0.0, sum_total_ = 0.0;
};

std::vector<std::size_t> candidate_features(std::size_t p, const GrowOptions& options) {
  std::vector<std::size_t> features(p);
  std::iota(features.begin(), features.end(), std::size_t{0});
  const auto m = options.features_per_split;
  if (m == 0 || m >= p) return features;
  if (options.rng == nullptr) throw Error(Errc::InvalidConfig, "feature subsampling needs an rng");
  // Partial Fisher-Yates: the first m slots become a uniform subset.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(options.rng->below(p - i));
    std::swap(features[i], features[j]);
  }
  features.resize(m);
  std::sort(features.begin(), features.end());
  return features;
}

template <class Criterion>
Candidate best_split(const Matrix& X, std::span<const std::size_t> samples, Criterion& crit,
                     double parent_impurity, const std::vector<std::size_t>& features) {
  Candidate best;
  std::vector<std::pair<double, std::size_t>> order(samples.size());
  for (auto f : features) {
    for (std::size_t j = 0; j < samples.size(); ++j) order[j] = {X(samples[j], f), samples[j]};
    std::sort(order.begin(), order.end());
    crit.begin_scan(samples);
    for (std::size_t j = 0; j + 1 < order.size(); ++j) {
      crit.move_left(order[j].second);
      const double lo = order[j].first;
      const double hi = order[j + 1].first;
      if (!(lo < hi)) continue;
      const double gain = crit.gain(parent_impurity);
      // Strict comparison keeps the first (lowest feature, lowest threshold) maximiser.
      if (gain > best.gain) {
        double t = lo + (hi - lo) / 2.0;
        if (!(t < hi)) t = lo;
        best = {static_cast<int>(f), t, gain};
      }
    }
  }
  return best;
}

struct Pending {
  int node;
  int depth;
  std::vector<std::size_t> samples;
};

template <class Criterion, class MakeLeaf>
TreeModel grow(const Matrix& X, std::span<const std::size_t> samples, Criterion& crit,
               const GrowOptions& options, MakeLeaf&& make_leaf) {
  if (samples.empty()) throw Error(Errc::TooFewSamples, "cannot grow a tree on zero samples");
  TreeModel tree;
  tree.n_features = X.cols();
  tree.nodes.emplace_back();

  std::vector<Pending> stack;
  stack.push_back({0, 0, std::vector<std::size_t>(samples.begin(), samples.end())});
  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    const auto& s = item.samples;
    tree.nodes[static_cast<std::size_t>(item.node)].n_samples = s.size();

    const double impurity = crit.node_impurity(s);
    const bool depth_reached = options.max_depth > 0 && item.depth >= options.max_depth;
    Candidate split;
    if (!depth_reached && s.size() >= std::max<std::size_t>(options.min_samples_split, 2) &&
        impurity > 0.0) {
      split = best_split(X, s, crit, impurity, candidate_features(X.cols(), options));
    }
    if (split.feature < 0 || split.gain <= kGainEpsilon ||
        split.gain < options.min_impurity_decrease) {
      make_leaf(tree.nodes[static_cast<std::size_t>(item.node)], item.node, std::move(item.samples));
      continue;
    }

    std::vector<std::size_t> left, right;
    for (auto i : s) {
      (X(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
    }
    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[static_cast<std::size_t>(item.node)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({right_id, item.depth + 1, std::move(right)});
    stack.push_back({left_id, item.depth + 1, std::move(left)});
  }
  return tree;
}

}  // namespace

TreeModel grow_classification_tree(const Matrix& X, std::span<const std::size_t> samples,
                                   std::span<const int> y, int n_classes,
                                   const GrowOptions& options) {
  GiniCriterion crit(y, n_classes);
  auto tree = grow(X, samples, crit, options,
                   [&](TreeNode& leaf, int, std::vector<std::size_t> s) {
                     leaf.class_counts = crit.class_counts(s);
                   });
  tree.n_classes = n_classes;
  return tree;
}

RegressionTree grow_regression_tree(const Matrix& X, std::span<const std::size_t> samples,
                                    std::span<const double> targets, const GrowOptions& options) {
  VarianceCriterion crit(targets);
  RegressionTree out;
  out.tree = grow(X, samples, crit, options, [&](TreeNode&, int id, std::vector<std::size_t> s) {
    if (out.leaf_samples.size() <= static_cast<std::size_t>(id)) {
      out.leaf_samples.resize(static_cast<std::size_t>(id) + 1);
    }
    out.leaf_samples[static_cast<std::size_t>(id)] = std::move(s);
  });
  out.leaf_samples.resize(out.tree.nodes.size());
  return out;
}

}  // namespace cropyield::detail
