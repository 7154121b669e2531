#include "cropyield/model_io.hpp"

#include "cropyield/error.hpp"

namespace cropyield {

namespace {

using ojson = nlohmann::ordered_json;

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from(const nlohmann::json& j, std::size_t cols) {
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = j.at(r).get<std::vector<double>>();
    if (row.size() != cols) throw Error(Errc::ModelFormat, "ragged matrix");
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

ojson tree_json(const TreeModel& t) {
  ojson nodes = ojson::array();
  for (const auto& n : t.nodes) {
    ojson e;
    e["n"] = n.n_samples;
    if (n.is_leaf()) {
      if (!n.class_counts.empty()) e["counts"] = n.class_counts;
      e["value"] = n.value;
    } else {
      e["f"] = n.feature;
      e["t"] = n.threshold;
      e["l"] = n.left;
      e["r"] = n.right;
    }
    nodes.push_back(std::move(e));
  }
  ojson j;
  j["n_features"] = t.n_features;
  j["n_classes"] = t.n_classes;
  j["nodes"] = std::move(nodes);
  return j;
}

TreeModel tree_from(const nlohmann::json& j) {
  TreeModel t;
  t.n_features = j.at("n_features").get<std::size_t>();
  t.n_classes = j.at("n_classes").get<int>();
  for (const auto& e : j.at("nodes")) {
    TreeNode n;
    n.n_samples = e.at("n").get<std::size_t>();
    if (e.contains("f")) {
      n.feature = e.at("f").get<int>();
      n.threshold = e.at("t").get<double>();
      n.left = e.at("l").get<int>();
      n.right = e.at("r").get<int>();
    } else {
      if (e.contains("counts")) n.class_counts = e.at("counts").get<std::vector<std::size_t>>();
      n.value = e.at("value").get<double>();
    }
    t.nodes.push_back(std::move(n));
  }
  const auto count = static_cast<int>(t.nodes.size());
  for (const auto& n : t.nodes) {
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count ||
                         static_cast<std::size_t>(n.feature) >= t.n_features)) {
      throw Error(Errc::ModelFormat, "tree node references out of range");
    }
  }
  if (t.nodes.empty()) throw Error(Errc::ModelFormat, "tree has no nodes");
  return t;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

ojson model_to_json(const TrainedModel& m) {
  ojson j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = std::string(model_name(kind_of(m)));
  std::visit(overloaded{
                 [&](const LogisticModel& model) {
                   j["n_features"] = model.n_features;
                   j["n_classes"] = model.n_classes;
                   j["iterations"] = model.iterations;
                   j["weights"] = matrix_json(model.weights);
                 },
                 [&](const TreeModel& model) { j["tree"] = tree_json(model); },
                 [&](const ForestModel& model) {
                   j["n_features"] = model.n_features;
                   j["n_classes"] = model.n_classes;
                   ojson trees = ojson::array();
                   for (const auto& t : model.trees) trees.push_back(tree_json(t));
                   j["trees"] = std::move(trees);
                 },
                 [&](const SvmModel& model) {
                   j["n_features"] = model.n_features;
                   j["n_classes"] = model.n_classes;
                   j["weights"] = matrix_json(model.weights);
                 },
                 [&](const KnnModel& model) {
                   j["n_features"] = model.n_features;
                   j["n_classes"] = model.n_classes;
                   j["k"] = model.config.k;
                   j["metric"] = model.config.metric == DistanceMetric::Euclidean ? "euclidean" : "manhattan";
                   j["train"] = matrix_json(model.train);
                   j["labels"] = model.labels;
                 },
                 [&](const NaiveBayesModel& model) {
                   j["n_features"] = model.n_features;
                   j["n_classes"] = model.n_classes;
                   j["priors"] = model.priors;
                   j["means"] = matrix_json(model.means);
                   j["variances"] = matrix_json(model.variances);
                   j["degenerate_features"] = model.degenerate_features;
                 },
                 [&](const BoostingModel& model) {
                   j["n_features"] = model.n_features;
                   j["n_classes"] = model.n_classes;
                   j["learning_rate"] = model.learning_rate;
                   j["initial_scores"] = model.initial_scores;
                   ojson classes = ojson::array();
                   for (const auto& rounds : model.rounds) {
                     ojson trees = ojson::array();
                     for (const auto& t : rounds) trees.push_back(tree_json(t));
                     classes.push_back(std::move(trees));
                   }
                   j["rounds"] = std::move(classes);
                 },
             },
             m);
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw Error(Errc::ModelFormat, "unsupported model format version");
    }
    const auto name = j.at("kind").get<std::string>();
    ModelKind kind;
    try {
      kind = parse_model_kind(name);
    } catch (const Error&) {
      throw Error(Errc::ModelFormat, "unknown model kind '" + name + "'");
    }
    auto dims = [&](auto& model) {
      model.n_features = j.at("n_features").get<std::size_t>();
      model.n_classes = j.at("n_classes").get<int>();
    };
    switch (kind) {
      case ModelKind::Logistic: {
        LogisticModel m;
        dims(m);
        m.iterations = j.at("iterations").get<std::size_t>();
        m.weights = matrix_from(j.at("weights"), m.n_features + 1);
        return m;
      }
      case ModelKind::Tree: return tree_from(j.at("tree"));
      case ModelKind::Forest: {
        ForestModel m;
        dims(m);
        for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
        return m;
      }
      case ModelKind::Svm: {
        SvmModel m;
        dims(m);
        m.weights = matrix_from(j.at("weights"), m.n_features + 1);
        return m;
      }
      case ModelKind::Knn: {
        KnnModel m;
        dims(m);
        m.config.k = j.at("k").get<std::size_t>();
        m.config.metric = j.at("metric").get<std::string>() == "manhattan" ? DistanceMetric::Manhattan
                                                                           : DistanceMetric::Euclidean;
        m.train = matrix_from(j.at("train"), m.n_features);
        m.labels = j.at("labels").get<LabelVector>();
        return m;
      }
      case ModelKind::NaiveBayes: {
        NaiveBayesModel m;
        dims(m);
        m.priors = j.at("priors").get<std::vector<double>>();
        m.means = matrix_from(j.at("means"), m.n_features);
        m.variances = matrix_from(j.at("variances"), m.n_features);
        m.degenerate_features = j.at("degenerate_features").get<std::vector<std::size_t>>();
        return m;
      }
      case ModelKind::Boosting: {
        BoostingModel m;
        dims(m);
        m.learning_rate = j.at("learning_rate").get<double>();
        m.initial_scores = j.at("initial_scores").get<std::vector<double>>();
        for (const auto& rounds : j.at("rounds")) {
          auto& out = m.rounds.emplace_back();
          for (const auto& t : rounds) out.push_back(tree_from(t));
        }
        return m;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ModelFormat, e.what());
  }
  throw Error(Errc::ModelFormat, "unhandled model kind");
}

std::string serialize_model(const TrainedModel& m) { return model_to_json(m).dump(1) + "\n"; }

TrainedModel parse_model(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ModelFormat, e.what());
  }
  return model_from_json(j);
}

}  // namespace cropyield
