#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cropyield/matrix.hpp"

namespace cropyield {

/// One prediction. `label` is the argmax of `scores` with ties going to the
/// smaller class index (k-NN uses its own vote tie rule, see predict_knn).
struct Prediction {
  int label = 0;
  std::vector<double> scores;
};
using Predictions = std::vector<Prediction>;

/// Index of the largest score; the first one wins ties.
int argmax(std::span<const double> scores) noexcept;

// ---------------------------------------------------------------------------
// Hyperparameters

struct TreeConfig {
  int max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_split = 2;
  double min_impurity_decrease = 0.0;
};

struct ForestConfig {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(p))
  TreeConfig tree{};
  unsigned threads = 0;  // 0 = hardware concurrency; does not affect results
};

struct LogisticConfig {
  double learning_rate = 0.1;
  std::size_t max_iters = 1000;
  double tolerance = 1e-6;
  double l2_penalty = 1e-4;
};

struct SvmConfig {
  double l2_penalty = 1e-3;
  std::size_t epochs = 50;
};

enum class DistanceMetric { Euclidean, Manhattan };

struct KnnConfig {
  std::size_t k = 3;
  DistanceMetric metric = DistanceMetric::Euclidean;
  friend bool operator==(const KnnConfig&, const KnnConfig&) = default;
};

struct NaiveBayesConfig {
  double variance_floor_rel = 1e-9;
};

struct BoostingConfig {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;
  int tree_depth = 3;
};

struct ModelConfig {
  LogisticConfig logistic{};
  TreeConfig tree{};
  ForestConfig forest{};
  SvmConfig svm{};
  KnnConfig knn{};
  NaiveBayesConfig naive_bayes{};
  BoostingConfig boosting{};
};

// ---------------------------------------------------------------------------
// Fitted models

/// Binary-split tree stored as a flat node list; node 0 is the root.
/// Internal nodes send x[feature] <= threshold to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::size_t> class_counts;  // leaves of classification trees
  double value = 0.0;                     // leaves of regression trees
  std::size_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  std::vector<TreeNode> nodes;

  /// Index of the leaf reached by `x`.
  std::size_t leaf_for(std::span<const double> x) const;
  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

struct ForestModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  std::vector<TreeModel> trees;
  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

/// Softmax regression. weights is K x (p + 1), last column the bias.
struct LogisticModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  Matrix weights;
  std::size_t iterations = 0;
  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

/// One-vs-rest linear SVM. weights is K x (p + 1), last column the bias.
struct SvmModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  Matrix weights;
  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

struct KnnModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  KnnConfig config{};
  Matrix train;
  LabelVector labels;
  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

/// Gaussian naive Bayes. means and variances are K x p.
struct NaiveBayesModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  std::vector<double> priors;
  Matrix means;
  Matrix variances;
  std::vector<std::size_t> degenerate_features;  // globally constant columns
  friend bool operator==(const NaiveBayesModel&, const NaiveBayesModel&) = default;
};

/// One-vs-rest logistic boosting with regression trees.
struct BoostingModel {
  std::size_t n_features = 0;
  int n_classes = 0;
  double learning_rate = 0.1;
  std::vector<double> initial_scores;          // per class
  std::vector<std::vector<TreeModel>> rounds;  // [class][round]
  friend bool operator==(const BoostingModel&, const BoostingModel&) = default;
};

using TrainedModel = std::variant<LogisticModel, TreeModel, ForestModel, SvmModel, KnnModel,
                                  NaiveBayesModel, BoostingModel>;

enum class ModelKind { Logistic, Tree, Forest, Svm, Knn, NaiveBayes, Boosting };

/// Canonical listing order.
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::Logistic, ModelKind::Tree,
                                               ModelKind::Forest,   ModelKind::Svm,
                                               ModelKind::Knn,      ModelKind::NaiveBayes,
                                               ModelKind::Boosting};

std::string_view model_name(ModelKind kind) noexcept;
/// Throws Error(InvalidConfig) for unknown names.
ModelKind parse_model_kind(std::string_view name);
ModelKind kind_of(const TrainedModel& m) noexcept;
std::size_t feature_count(const TrainedModel& m) noexcept;

// ---------------------------------------------------------------------------
// Fitting and prediction. Labels are 0..K-1 with K = max(y) + 1.

NaiveBayesModel fit_naive_bayes(const Matrix& X, std::span<const int> y,
                                const NaiveBayesConfig& cfg = {});
Predictions predict_naive_bayes(const NaiveBayesModel& m, const Matrix& X);

/// CART with Gini impurity over all features.
TreeModel fit_tree(const Matrix& X, std::span<const int> y, const TreeConfig& cfg = {});
Predictions predict_tree(const TreeModel& m, const Matrix& X);

ForestModel fit_forest(const Matrix& X, std::span<const int> y, const ForestConfig& cfg,
                       std::uint64_t seed);
Predictions predict_forest(const ForestModel& m, const Matrix& X);

/// Throws Error(KTooLarge) when k exceeds the training size.
KnnModel fit_knn(const Matrix& X, std::span<const int> y, const KnnConfig& cfg = {});
Predictions predict_knn(const KnnModel& m, const Matrix& X);

LogisticModel fit_logistic(const Matrix& X, std::span<const int> y, const LogisticConfig& cfg = {});
Predictions predict_logistic(const LogisticModel& m, const Matrix& X);

/// Mean softmax cross-entropy plus (l2/2)||W||^2 with the bias column
/// excluded from the penalty, and its gradient with respect to W.
double logistic_objective(const Matrix& W, const Matrix& X, std::span<const int> y, double l2);
Matrix logistic_gradient(const Matrix& W, const Matrix& X, std::span<const int> y, double l2);

SvmModel fit_svm(const Matrix& X, std::span<const int> y, const SvmConfig& cfg, std::uint64_t seed);
Predictions predict_svm(const SvmModel& m, const Matrix& X);

BoostingModel fit_boosting(const Matrix& X, std::span<const int> y, const BoostingConfig& cfg = {});
Predictions predict_boosting(const BoostingModel& m, const Matrix& X);

/// Summed binary logistic loss sum_i log(1 + e^{F_i}) - t_i F_i, t_i in {0, 1},
/// and its gradient / diagonal Hessian with respect to the scores F.
double boosting_loss(std::span<const double> scores, std::span<const int> targets);
std::vector<double> boosting_gradient(std::span<const double> scores, std::span<const int> targets);
std::vector<double> boosting_hessian(std::span<const double> scores);

/// Per-class training loss after 0..n_rounds rounds, [class][round].
std::vector<std::vector<double>> boosting_loss_trace(const BoostingModel& m, const Matrix& X,
                                                     std::span<const int> y);

/// Fits any model kind with the matching section of `cfg`.
TrainedModel fit(ModelKind kind, const Matrix& X, std::span<const int> y, const ModelConfig& cfg,
                 std::uint64_t seed);

/// Uniform dispatcher. Throws Error(DimensionMismatch) on a column count
/// that differs from training.
Predictions predict(const TrainedModel& m, const Matrix& X);

LabelVector labels_of(const Predictions& p);

}  // namespace cropyield
