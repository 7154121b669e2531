#include "cropyield/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cropyield/error.hpp"
#include "cropyield/ingest.hpp"

namespace cropyield {

namespace {

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(Errc::InvalidConfig, "'" + std::string(key) + "': expected " + std::string(expected) +
                                       ", got '" + std::string(value) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad(key, v, "a number");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  const auto d = parse_number<double>(key, v);
  if (!std::isfinite(d)) bad(key, v, "a finite number");
  return d;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
  if (!v.empty() && v.front() == '-') bad(key, v, "a non-negative integer");
  return parse_number<std::size_t>(key, v);
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad(key, v, "true or false");
}

std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    auto comma = v.find(',', start);
    if (comma == std::string_view::npos) comma = v.size();
    const auto item = trim(v.substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

std::vector<ModelKind> parse_models(std::string_view key, std::string_view v) {
  std::vector<ModelKind> out;
  for (const auto& name : parse_list(v)) {
    const auto kind = parse_model_kind(name);
    if (std::find(out.begin(), out.end(), kind) != out.end()) bad(key, v, "distinct model names");
    out.push_back(kind);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"input", [](RunConfig& c, auto, auto v) { c.input = std::string(v); }},
      {"outdir", [](RunConfig& c, auto, auto v) { c.outdir = std::string(v); }},
      {"seed", [](RunConfig& c, auto k, auto v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"classes", [](RunConfig& c, auto k, auto v) { c.classes = parse_number<int>(k, v); }},
      {"train_fraction", [](RunConfig& c, auto k, auto v) { c.train_fraction = parse_real(k, v); }},
      {"stratified", [](RunConfig& c, auto k, auto v) { c.stratified = parse_bool(k, v); }},
      {"per_crop_quartiles",
       [](RunConfig& c, auto k, auto v) { c.per_crop_quartiles = parse_bool(k, v); }},
      {"features", [](RunConfig& c, auto, auto v) { c.features = parse_list(v); }},
      {"models", [](RunConfig& c, auto k, auto v) { c.models = parse_models(k, v); }},
      {"parallel", [](RunConfig& c, auto k, auto v) { c.parallel = parse_bool(k, v); }},
      {"strict", [](RunConfig& c, auto k, auto v) { c.strict = parse_bool(k, v); }},
      {"drop_invalid", [](RunConfig& c, auto k, auto v) { c.drop_invalid = parse_bool(k, v); }},
      {"max_scatter_points",
       [](RunConfig& c, auto k, auto v) { c.max_scatter_points = parse_count(k, v); }},

      {"logistic.learning_rate",
       [](RunConfig& c, auto k, auto v) { c.model.logistic.learning_rate = parse_real(k, v); }},
      {"logistic.max_iters",
       [](RunConfig& c, auto k, auto v) { c.model.logistic.max_iters = parse_count(k, v); }},
      {"logistic.tolerance",
       [](RunConfig& c, auto k, auto v) { c.model.logistic.tolerance = parse_real(k, v); }},
      {"logistic.l2_penalty",
       [](RunConfig& c, auto k, auto v) { c.model.logistic.l2_penalty = parse_real(k, v); }},

      {"tree.max_depth",
       [](RunConfig& c, auto k, auto v) { c.model.tree.max_depth = parse_number<int>(k, v); }},
      {"tree.min_samples_split",
       [](RunConfig& c, auto k, auto v) { c.model.tree.min_samples_split = parse_count(k, v); }},
      {"tree.min_impurity_decrease",
       [](RunConfig& c, auto k, auto v) { c.model.tree.min_impurity_decrease = parse_real(k, v); }},

      {"forest.n_trees",
       [](RunConfig& c, auto k, auto v) { c.model.forest.n_trees = parse_count(k, v); }},
      {"forest.bootstrap",
       [](RunConfig& c, auto k, auto v) { c.model.forest.bootstrap = parse_bool(k, v); }},
      {"forest.features_per_split",
       [](RunConfig& c, auto k, auto v) { c.model.forest.features_per_split = parse_count(k, v); }},
      {"forest.max_depth",
       [](RunConfig& c, auto k, auto v) { c.model.forest.tree.max_depth = parse_number<int>(k, v); }},
      {"forest.min_samples_split",
       [](RunConfig& c, auto k, auto v) { c.model.forest.tree.min_samples_split = parse_count(k, v); }},
      {"forest.threads",
       [](RunConfig& c, auto k, auto v) { c.model.forest.threads = parse_number<unsigned>(k, v); }},

      {"svm.l2_penalty",
       [](RunConfig& c, auto k, auto v) { c.model.svm.l2_penalty = parse_real(k, v); }},
      {"svm.epochs", [](RunConfig& c, auto k, auto v) { c.model.svm.epochs = parse_count(k, v); }},

      {"knn.k", [](RunConfig& c, auto k, auto v) { c.model.knn.k = parse_count(k, v); }},
      {"knn.metric",
       [](RunConfig& c, auto k, auto v) {
         if (v == "euclidean") {
           c.model.knn.metric = DistanceMetric::Euclidean;
         } else if (v == "manhattan") {
           c.model.knn.metric = DistanceMetric::Manhattan;
         } else {
           bad(k, v, "euclidean or manhattan");
         }
       }},

      {"naive_bayes.variance_floor",
       [](RunConfig& c, auto k, auto v) { c.model.naive_bayes.variance_floor_rel = parse_real(k, v); }},

      {"boosting.n_rounds",
       [](RunConfig& c, auto k, auto v) { c.model.boosting.n_rounds = parse_count(k, v); }},
      {"boosting.learning_rate",
       [](RunConfig& c, auto k, auto v) { c.model.boosting.learning_rate = parse_real(k, v); }},
      {"boosting.max_depth",
       [](RunConfig& c, auto k, auto v) { c.model.boosting.tree_depth = parse_number<int>(k, v); }},
  };
  return table;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw Error(Errc::InvalidConfig, "unknown key '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      apply_setting(cfg, key, value);
    } catch (const Error& e) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return cfg;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void check_config(const RunConfig& cfg) {
  auto fail = [](const std::string& m) { throw Error(Errc::InvalidConfig, m); };
  if (cfg.input.empty()) fail("no input file given");
  if (cfg.classes != 2 && cfg.classes != 4) fail("classes must be 2 or 4");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) fail("train_fraction must lie in (0, 1)");
  if (cfg.features.empty()) fail("feature list is empty");
  if (cfg.models.empty()) fail("model list is empty");
  if (cfg.model.forest.n_trees == 0) fail("forest.n_trees must be positive");
  if (cfg.model.knn.k == 0) fail("knn.k must be positive");
  if (cfg.model.svm.l2_penalty <= 0.0) fail("svm.l2_penalty must be positive");
  if (cfg.model.boosting.tree_depth < 1) fail("boosting.max_depth must be positive");
}

std::string to_text(const RunConfig& cfg) {
  std::vector<std::string> models;
  for (auto m : cfg.models) models.emplace_back(model_name(m));
  const auto& mc = cfg.model;
  std::ostringstream out;
  out << "input = " << cfg.input << '\n'
      << "seed = " << cfg.seed << '\n'
      << "classes = " << cfg.classes << '\n'
      << "train_fraction = " << format_double(cfg.train_fraction) << '\n'
      << "stratified = " << flag(cfg.stratified) << '\n'
      << "per_crop_quartiles = " << flag(cfg.per_crop_quartiles) << '\n'
      << "features = " << join(cfg.features) << '\n'
      << "models = " << join(models) << '\n'
      << "parallel = " << flag(cfg.parallel) << '\n'
      << "strict = " << flag(cfg.strict) << '\n'
      << "drop_invalid = " << flag(cfg.drop_invalid) << '\n'
      << "max_scatter_points = " << cfg.max_scatter_points << '\n'
      << "logistic.learning_rate = " << format_double(mc.logistic.learning_rate) << '\n'
      << "logistic.max_iters = " << mc.logistic.max_iters << '\n'
      << "logistic.tolerance = " << format_double(mc.logistic.tolerance) << '\n'
      << "logistic.l2_penalty = " << format_double(mc.logistic.l2_penalty) << '\n'
      << "tree.max_depth = " << mc.tree.max_depth << '\n'
      << "tree.min_samples_split = " << mc.tree.min_samples_split << '\n'
      << "tree.min_impurity_decrease = " << format_double(mc.tree.min_impurity_decrease) << '\n'
      << "forest.n_trees = " << mc.forest.n_trees << '\n'
      << "forest.bootstrap = " << flag(mc.forest.bootstrap) << '\n'
      << "forest.features_per_split = " << mc.forest.features_per_split << '\n'
      << "forest.max_depth = " << mc.forest.tree.max_depth << '\n'
      << "forest.min_samples_split = " << mc.forest.tree.min_samples_split << '\n'
      << "forest.threads = " << mc.forest.threads << '\n'
      << "svm.l2_penalty = " << format_double(mc.svm.l2_penalty) << '\n'
      << "svm.epochs = " << mc.svm.epochs << '\n'
      << "knn.k = " << mc.knn.k << '\n'
      << "knn.metric = " << (mc.knn.metric == DistanceMetric::Euclidean ? "euclidean" : "manhattan")
      << '\n'
      << "naive_bayes.variance_floor = " << format_double(mc.naive_bayes.variance_floor_rel) << '\n'
      << "boosting.n_rounds = " << mc.boosting.n_rounds << '\n'
      << "boosting.learning_rate = " << format_double(mc.boosting.learning_rate) << '\n'
      << "boosting.max_depth = " << mc.boosting.tree_depth << '\n';
  return out.str();
}

}  // namespace cropyield
