#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropyield/classifiers.hpp"

namespace cropyield {

/// K x K counts; row = actual class, column = predicted class.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int k);

  int classes() const noexcept { return k_; }
  std::size_t at(int actual, int predicted) const {
    return counts_[static_cast<std::size_t>(actual * k_ + predicted)];
  }
  void add(int actual, int predicted, std::size_t count = 1) {
    counts_[static_cast<std::size_t>(actual * k_ + predicted)] += count;
  }

  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_sum(int actual) const;
  std::size_t col_sum(int predicted) const;
  std::size_t max_count() const noexcept;

  /// Element-wise sum; both matrices must have the same K.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int k_ = 0;
  std::vector<std::size_t> counts_;
};

/// Throws Error(LengthMismatch) or Error(LabelOutOfRange).
ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred, int k);

struct Metrics {
  double accuracy = 0.0;
  std::vector<double> precision;  // per class
  std::vector<double> recall;
  std::vector<double> f1;
  double macro_precision = 0.0;  // over classes that occur in y_true
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double micro_recall = 0.0;            // trace / total; equals accuracy
  std::vector<int> zero_division_classes;  // classes where a 0/0 was resolved to 0
};

/// Throws Error(EmptyMatrix) when the matrix has no observations.
Metrics metrics_from_cm(const ConfusionMatrix& cm);

struct EvalReport {
  ConfusionMatrix confusion;
  Metrics metrics;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

/// Predicts `X_test` and scores against `y_test` with K classes.
EvalReport evaluate_model(const TrainedModel& model, const Matrix& X_test,
                          std::span<const int> y_test, int k);

struct ComparisonRow {
  std::string model;
  EvalReport report;
};

/// Rows in canonical model order (logistic, tree, forest, svm, knn,
/// naive_bayes, boosting); names outside that list follow in input order.
using ComparisonTable = std::vector<ComparisonRow>;

/// Throws Error(EmptyTable) for no rows, Error(InvalidConfig) for duplicates.
ComparisonTable compare_models(std::vector<ComparisonRow> rows);

/// Durations are omitted unless requested: they are the only
/// non-reproducible part of a report.
nlohmann::ordered_json to_json(const ConfusionMatrix& cm);
nlohmann::ordered_json to_json(const Metrics& m);
nlohmann::ordered_json to_json(const EvalReport& r, bool include_timings = false);
nlohmann::ordered_json to_json(const ComparisonTable& t, bool include_timings = false);

/// Header `model,accuracy,precision,recall,f1` with macro averages.
std::string to_csv(const ComparisonTable& t);

}  // namespace cropyield
