#include "cropyield/eval.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "cropyield/error.hpp"
#include "cropyield/ingest.hpp"

namespace cropyield {

ConfusionMatrix::ConfusionMatrix(int k) : k_(k), counts_(static_cast<std::size_t>(k * k), 0) {
  if (k < 0) throw Error(Errc::InvalidConfig, "negative class count");
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t s = 0;
  for (int c = 0; c < k_; ++c) s += at(c, c);
  return s;
}

std::size_t ConfusionMatrix::row_sum(int actual) const {
  std::size_t s = 0;
  for (int p = 0; p < k_; ++p) s += at(actual, p);
  return s;
}

std::size_t ConfusionMatrix::col_sum(int predicted) const {
  std::size_t s = 0;
  for (int a = 0; a < k_; ++a) s += at(a, predicted);
  return s;
}

std::size_t ConfusionMatrix::max_count() const noexcept {
  return counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw Error(Errc::DimensionMismatch, "confusion matrices differ in size");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred, int k) {
  if (y_true.size() != y_pred.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(y_true.size()) + " actual vs " +
                                          std::to_string(y_pred.size()) + " predicted labels");
  }
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= k || y_pred[i] < 0 || y_pred[i] >= k) {
      throw Error(Errc::LabelOutOfRange, "label at position " + std::to_string(i) +
                                             " outside [0, " + std::to_string(k) + ")");
    }
    cm.add(y_true[i], y_pred[i]);
  }
  return cm;
}

Metrics metrics_from_cm(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw Error(Errc::EmptyMatrix, "confusion matrix has no observations");
  const int k = cm.classes();
  Metrics m;
  m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  m.micro_recall = static_cast<double>(cm.trace()) / static_cast<double>(total);
  m.precision.resize(static_cast<std::size_t>(k));
  m.recall.resize(static_cast<std::size_t>(k));
  m.f1.resize(static_cast<std::size_t>(k));

  std::size_t present = 0;
  for (int c = 0; c < k; ++c) {
    const auto tp = static_cast<double>(cm.at(c, c));
    const auto col = cm.col_sum(c);
    const auto row = cm.row_sum(c);
    bool zero_division = false;
    double p = 0.0, r = 0.0, f = 0.0;
    if (col > 0) p = tp / static_cast<double>(col); else zero_division = true;
    if (row > 0) r = tp / static_cast<double>(row); else zero_division = true;
    if (p + r > 0.0) f = 2.0 * p * r / (p + r); else zero_division = true;
    const auto idx = static_cast<std::size_t>(c);
    m.precision[idx] = p;
    m.recall[idx] = r;
    m.f1[idx] = f;
    if (zero_division) m.zero_division_classes.push_back(c);
    if (row > 0) {
      m.macro_precision += p;
      m.macro_recall += r;
      m.macro_f1 += f;
      ++present;
    }
  }
  m.macro_precision /= static_cast<double>(present);
  m.macro_recall /= static_cast<double>(present);
  m.macro_f1 /= static_cast<double>(present);
  return m;
}

EvalReport evaluate_model(const TrainedModel& model, const Matrix& X_test,
                          std::span<const int> y_test, int k) {
  const auto start = std::chrono::steady_clock::now();
  const auto predictions = predict(model, X_test);
  const auto stop = std::chrono::steady_clock::now();
  const auto labels = labels_of(predictions);
  EvalReport report;
  report.confusion = confusion_matrix(y_test, labels, k);
  report.metrics = metrics_from_cm(report.confusion);
  report.predict_seconds = std::chrono::duration<double>(stop - start).count();
  return report;
}

ComparisonTable compare_models(std::vector<ComparisonRow> rows) {
  if (rows.empty()) throw Error(Errc::EmptyTable, "no models to compare");
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (!seen.insert(r.model).second) {
      throw Error(Errc::InvalidConfig, "duplicate model name '" + r.model + "'");
    }
  }
  auto rank = [](const std::string& name) {
    for (std::size_t i = 0; i < std::size(kAllModelKinds); ++i) {
      if (model_name(kAllModelKinds[i]) == name) return i;
    }
    return std::size(kAllModelKinds);
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const ComparisonRow& a, const ComparisonRow& b) {
    return rank(a.model) < rank(b.model);
  });
  return rows;
}

nlohmann::ordered_json to_json(const ConfusionMatrix& cm) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int a = 0; a < cm.classes(); ++a) {
    std::vector<std::size_t> row;
    for (int p = 0; p < cm.classes(); ++p) row.push_back(cm.at(a, p));
    rows.push_back(row);
  }
  nlohmann::ordered_json j;
  j["classes"] = cm.classes();
  j["layout"] = "rows=actual,cols=predicted";
  j["counts"] = std::move(rows);
  return j;
}

nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["averaging"] = "macro";
  j["accuracy"] = m.accuracy;
  j["precision"] = m.macro_precision;
  j["recall"] = m.macro_recall;
  j["f1"] = m.macro_f1;
  j["micro_recall"] = m.micro_recall;
  j["per_class"] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  j["zero_division_classes"] = m.zero_division_classes;
  return j;
}

nlohmann::ordered_json to_json(const EvalReport& r, bool include_timings) {
  nlohmann::ordered_json j;
  j["confusion_matrix"] = to_json(r.confusion);
  j["metrics"] = to_json(r.metrics);
  if (include_timings) {
    j["fit_seconds"] = r.fit_seconds;
    j["predict_seconds"] = r.predict_seconds;
  }
  return j;
}

nlohmann::ordered_json to_json(const ComparisonTable& t, bool include_timings) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t) {
    nlohmann::ordered_json e;
    e["model"] = row.model;
    e["report"] = to_json(row.report, include_timings);
    rows.push_back(std::move(e));
  }
  nlohmann::ordered_json j;
  j["models"] = std::move(rows);
  return j;
}

std::string to_csv(const ComparisonTable& t) {
  std::string out = "model,accuracy,precision,recall,f1\n";
  for (const auto& row : t) {
    const auto& m = row.report.metrics;
    out += row.model + "," + format_double(m.accuracy) + "," + format_double(m.macro_precision) +
           "," + format_double(m.macro_recall) + "," + format_double(m.macro_f1) + "\n";
  }
  return out;
}

}  // namespace cropyield
