#include "cropyield/classifiers.hpp"
#include "cropyield/error.hpp"
#include "model_common.hpp"

namespace cropyield {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Logistic: return "logistic";
    case ModelKind::Tree: return "tree";
    case ModelKind::Forest: return "forest";
    case ModelKind::Svm: return "svm";
    case ModelKind::Knn: return "knn";
    case ModelKind::NaiveBayes: return "naive_bayes";
    case ModelKind::Boosting: return "boosting";
  }
  return "";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto kind : kAllModelKinds) {
    if (model_name(kind) == name) return kind;
  }
  // Long spellings are accepted on input only.
  if (name == "random_forest") return ModelKind::Forest;
  if (name == "decision_tree") return ModelKind::Tree;
  if (name == "gradient_boosting") return ModelKind::Boosting;
  throw Error(Errc::InvalidConfig, "unknown model '" + std::string(name) + "'");
}

ModelKind kind_of(const TrainedModel& m) noexcept {
  return std::visit(overloaded{
                        [](const LogisticModel&) { return ModelKind::Logistic; },
                        [](const TreeModel&) { return ModelKind::Tree; },
                        [](const ForestModel&) { return ModelKind::Forest; },
                        [](const SvmModel&) { return ModelKind::Svm; },
                        [](const KnnModel&) { return ModelKind::Knn; },
                        [](const NaiveBayesModel&) { return ModelKind::NaiveBayes; },
                        [](const BoostingModel&) { return ModelKind::Boosting; },
                    },
                    m);
}

std::size_t feature_count(const TrainedModel& m) noexcept {
  return std::visit([](const auto& model) { return model.n_features; }, m);
}

TrainedModel fit(ModelKind kind, const Matrix& X, std::span<const int> y, const ModelConfig& cfg,
                 std::uint64_t seed) {
  switch (kind) {
    case ModelKind::Logistic: return fit_logistic(X, y, cfg.logistic);
    case ModelKind::Tree: return fit_tree(X, y, cfg.tree);
    case ModelKind::Forest: return fit_forest(X, y, cfg.forest, seed);
    case ModelKind::Svm: return fit_svm(X, y, cfg.svm, seed);
    case ModelKind::Knn: return fit_knn(X, y, cfg.knn);
    case ModelKind::NaiveBayes: return fit_naive_bayes(X, y, cfg.naive_bayes);
    case ModelKind::Boosting: return fit_boosting(X, y, cfg.boosting);
  }
  throw Error(Errc::InvalidConfig, "unhandled model kind");
}

Predictions predict(const TrainedModel& m, const Matrix& X) {
  return std::visit(overloaded{
                        [&](const LogisticModel& model) { return predict_logistic(model, X); },
                        [&](const TreeModel& model) { return predict_tree(model, X); },
                        [&](const ForestModel& model) { return predict_forest(model, X); },
                        [&](const SvmModel& model) { return predict_svm(model, X); },
                        [&](const KnnModel& model) { return predict_knn(model, X); },
                        [&](const NaiveBayesModel& model) { return predict_naive_bayes(model, X); },
                        [&](const BoostingModel& model) { return predict_boosting(model, X); },
                    },
                    m);
}

LabelVector labels_of(const Predictions& p) {
  LabelVector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].label;
  return out;
}

}  // namespace cropyield
