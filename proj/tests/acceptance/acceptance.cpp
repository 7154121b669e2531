// One line per acceptance criterion: PASS, FAIL or SKIP with the measured
// values. Exits nonzero only when a criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "cropyield/classifiers.hpp"
#include "cropyield/eval.hpp"
#include "cropyield/pipeline.hpp"
#include "cropyield/preprocess.hpp"
#include "cropyield/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "svg_check.hpp"

using namespace cropyield;
namespace fs = std::filesystem;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double accuracy(const Predictions& p, std::span<const int> y) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hit += p[i].label == y[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(y.size());
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

// --- 1 ------------------------------------------------------------------------

Outcome dataset_fidelity() {
  const char* env = std::getenv("CROPYIELD_KAGGLE_CSV");
  const fs::path path = env && *env ? fs::path(env) : fs::path(CROPYIELD_KAGGLE_DEFAULT);
  if (!fs::exists(path)) return {Verdict::Skip, "public dataset not found at " + path.string()};
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = inspect_file(path);
  const double secs = seconds_since(t0);
  const auto& s = r.summary;
  const double area = s.feature(NumericField::Area).mean;
  const double rain = s.feature(NumericField::AnnualRainfall).mean;
  const double yield_mean = s.feature(NumericField::Yield).mean;
  const double yield_max = s.feature(NumericField::Yield).max;
  const bool ok = s.distinct_crops == 55 && s.distinct_seasons == 6 && s.distinct_states == 30 &&
                  s.year_min == 1997 && s.year_max == 2020 && within_rel(area, 179926, 0.01) &&
                  within_rel(rain, 1438, 0.01) && within_rel(yield_mean, 79.95, 0.01) &&
                  within_rel(yield_max, 21105, 0.01) && secs < 10.0;
  return pass_if(ok, fmt("crops %zu seasons %zu states %zu years %d-%d area %.1f rainfall %.1f "
                         "yield mean %.3f max %.1f in %.2fs",
                         s.distinct_crops, s.distinct_seasons, s.distinct_states, s.year_min, s.year_max, area,
                         rain, yield_mean, yield_max, secs));
}

// --- 2, 3 ----------------------------------------------------------------------

struct SynthSplit {
  SynthSpec spec;
  Matrix X_train, X_test;
  LabelVector y_train, y_test;
};

/// 10,000 samples of the four-class spec, stratified 80/20 split, min-max
/// scaled on the training rows.
const SynthSplit& synth_split() {
  static const SynthSplit cached = [] {
    SynthSplit s;
    s.spec = fixtures::four_class_spec(10000, 2024);
    const auto data = generate(s.spec);
    const auto fm = build_feature_matrix(data.dataset);
    const auto idx = cropyield::split(data.labels, {0.8, 2024, true});
    const auto scaler = fit_scaler(fm.values.select_rows(idx.train));
    s.X_train = apply_scaler(scaler, fm.values.select_rows(idx.train));
    s.X_test = apply_scaler(scaler, fm.values.select_rows(idx.test));
    for (auto i : idx.train) s.y_train.push_back(data.labels[i]);
    for (auto i : idx.test) s.y_test.push_back(data.labels[i]);
    return s;
  }();
  return cached;
}

double nb_test_accuracy() {
  static const double acc = [] {
    const auto& s = synth_split();
    return accuracy(predict_naive_bayes(fit_naive_bayes(s.X_train, s.y_train), s.X_test), s.y_test);
  }();
  return acc;
}

Outcome naive_bayes_near_bayes_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& s = synth_split();
  const auto oracle = bayes_optimal_accuracy(s.spec, 100000, 7);
  const double nb = nb_test_accuracy();
  const double secs = seconds_since(t0);
  const bool ok = oracle.accuracy >= 0.95 && std::abs(nb - oracle.accuracy) <= 0.02 && secs < 30.0;
  return pass_if(ok, fmt("bayes %.4f (se %.4f) nb %.4f on %zu train / %zu test in %.2fs", oracle.accuracy,
                         oracle.std_error, nb, s.y_train.size(), s.y_test.size(), secs));
}

Outcome forest_sanity() {
  const auto& s = synth_split();
  const auto t0 = std::chrono::steady_clock::now();
  ForestConfig cfg;
  cfg.n_trees = 100;
  const double rf = accuracy(predict_forest(fit_forest(s.X_train, s.y_train, cfg, 2024), s.X_test), s.y_test);
  const double secs = seconds_since(t0);
  std::map<int, std::size_t> counts;
  for (int y : s.y_train) counts[y]++;
  int majority = 0;
  for (const auto& [c, n] : counts) {
    if (n > counts[majority]) majority = c;
  }
  std::size_t hits = 0;
  for (int y : s.y_test) hits += y == majority ? 1 : 0;
  const double baseline = static_cast<double>(hits) / static_cast<double>(s.y_test.size());
  const double nb = nb_test_accuracy();
  const bool ok = rf >= nb - 0.05 && rf >= baseline + 0.25 && secs < 60.0;
  return pass_if(ok, fmt("forest %.4f nb %.4f majority %.4f in %.2fs", rf, nb, baseline, secs));
}

// --- 4 -------------------------------------------------------------------------

Outcome oracle_equivalences() {
  std::size_t forest_mismatch = 0, knn_mismatch = 0, knn_checked = 0;
  double nb_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto b = fixtures::blobs(200, 4, 4, 0.8, seed);
    const auto q = fixtures::blobs(100, 4, 4, 0.8, seed + 100);
    ForestConfig fc;
    fc.n_trees = 1;
    fc.bootstrap = false;
    fc.features_per_split = 4;
    const auto forest = labels_of(predict_forest(fit_forest(b.X, b.y, fc, seed), q.X));
    const auto tree = labels_of(predict_tree(fit_tree(b.X, b.y), q.X));
    for (std::size_t i = 0; i < forest.size(); ++i) forest_mismatch += forest[i] != tree[i] ? 1 : 0;

    const auto kb = fixtures::blobs(100, 3, 4, 0.6, seed + 200);
    const auto kq = fixtures::blobs(20, 3, 4, 0.6, seed + 300);
    for (std::size_t k : {1u, 3u, 5u}) {
      KnnConfig kc;
      kc.k = k;
      const auto preds = predict_knn(fit_knn(kb.X, kb.y, kc), kq.X);
      for (std::size_t i = 0; i < kq.X.rows(); ++i) {
        knn_mismatch += preds[i].label != oracles::knn_oracle(kb.X, kb.y, kq.X.row(i), k, 4) ? 1 : 0;
        ++knn_checked;
      }
    }

    const auto nbm = fit_naive_bayes(b.X, b.y);
    const auto post = predict_naive_bayes(nbm, q.X);
    for (std::size_t i = 0; i < q.X.rows(); i += 5) {
      const auto want = oracles::nb_posterior_oracle(b.X, b.y, q.X.row(i), NaiveBayesConfig{}.variance_floor_rel);
      for (std::size_t c = 0; c < want.size(); ++c) nb_worst = std::max(nb_worst, std::abs(post[i].scores[c] - want[c]));
    }
  }
  const bool ok = forest_mismatch == 0 && knn_mismatch == 0 && nb_worst <= 1e-9;
  return pass_if(ok, fmt("forest/tree mismatches %zu, knn mismatches %zu of %zu, nb max posterior error %.2e",
                         forest_mismatch, knn_mismatch, knn_checked, nb_worst));
}

// --- 5 -------------------------------------------------------------------------

Outcome labeling_balance() {
  auto spec = fixtures::four_class_spec(1000, 5);
  spec.crop_vocab = 1;
  const auto data = generate(spec);
  std::set<double> distinct;
  for (const auto& r : data.dataset.records) distinct.insert(r.yield_value);
  std::string detail = fmt("%zu distinct yields;", distinct.size());
  bool ok = distinct.size() == 1000;
  for (int k : {4, 2}) {
    const auto nd = label_yield_classes(normalize_yield_per_crop(data.dataset), {k, false});
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (int l : *nd.labels) counts[static_cast<std::size_t>(l)]++;
    detail += fmt(" K=%d:", k);
    for (auto c : counts) {
      detail += fmt(" %zu", c);
      ok = ok && c == 1000u / static_cast<std::size_t>(k);
    }
  }
  return pass_if(ok, detail);
}

// --- 6 -------------------------------------------------------------------------

Outcome metric_correctness() {
  ConfusionMatrix cm(2);
  cm.add(0, 0, 1);
  cm.add(0, 1, 1);
  cm.add(1, 1, 2);
  const auto m = metrics_from_cm(cm);
  bool ok = m.accuracy == 0.75 && std::abs(m.macro_f1 - 11.0 / 15.0) <= 1e-12;
  Rng rng(6);
  std::size_t disagreements = 0;
  for (int t = 0; t < 100; ++t) {
    const int k = 2 + static_cast<int>(rng.below(6));
    ConfusionMatrix r(k);
    for (int a = 0; a < k; ++a) {
      for (int p = 0; p < k; ++p) r.add(a, p, rng.below(20));
    }
    r.add(0, 0, 1);
    const auto rm = metrics_from_cm(r);
    disagreements += rm.micro_recall == rm.accuracy ? 0 : 1;
  }
  ok = ok && disagreements == 0;
  return pass_if(ok, fmt("accuracy %.4f macro_f1 %.15f; micro-recall != accuracy in %zu of 100", m.accuracy,
                         m.macro_f1, disagreements));
}

// --- 7 -------------------------------------------------------------------------

Outcome gradient_checks() {
  Rng rng(7);
  double worst_logistic = 0.0, worst_boosting = 0.0;
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = fixtures::blobs(5 + rng.below(20), 2 + rng.below(4), 2 + static_cast<int>(rng.below(3)), 1.0,
                                   500 + static_cast<std::uint64_t>(trial));
    int k = 0;
    for (int y : b.y) k = std::max(k, y + 1);
    Matrix W(static_cast<std::size_t>(k), b.X.cols() + 1);
    for (std::size_t i = 0; i < W.rows(); ++i) {
      for (std::size_t j = 0; j < W.cols(); ++j) W(i, j) = rng.normal();
    }
    const auto G = logistic_gradient(W, b.X, b.y, 0.01);
    for (std::size_t i = 0; i < W.rows(); ++i) {
      for (std::size_t j = 0; j < W.cols(); ++j) {
        auto wp = W, wm = W;
        wp(i, j) += h;
        wm(i, j) -= h;
        const double fd =
            (logistic_objective(wp, b.X, b.y, 0.01) - logistic_objective(wm, b.X, b.y, 0.01)) / (2 * h);
        worst_logistic = std::max(worst_logistic, oracles::rel_error(G(i, j), fd));
      }
    }

    std::vector<double> F(b.y.size());
    std::vector<int> t(b.y.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
      F[i] = 2 * rng.normal();
      t[i] = b.y[i] == 0 ? 1 : 0;
    }
    const auto g = boosting_gradient(F, t);
    for (std::size_t i = 0; i < F.size(); ++i) {
      auto fp = F, fm = F;
      fp[i] += h;
      fm[i] -= h;
      const double fd = (boosting_loss(fp, t) - boosting_loss(fm, t)) / (2 * h);
      worst_boosting = std::max(worst_boosting, oracles::rel_error(g[i], fd));
    }
  }
  return pass_if(worst_logistic < 1e-4 && worst_boosting < 1e-4,
                 fmt("max relative error logistic %.2e boosting %.2e", worst_logistic, worst_boosting));
}

// --- 8, 9 ----------------------------------------------------------------------

struct RunDir {
  fs::path root;
  fs::path csv;
};

const RunDir& desk_dataset() {
  static const RunDir dir = [] {
    RunDir d{fixtures::temp_dir("acceptance"), {}};
    d.csv = d.root / "synth_5000.csv";
    fixtures::write_file(d.csv, to_csv(generate(fixtures::four_class_spec(5000, 99)).dataset));
    return d;
  }();
  return dir;
}

RunConfig desk_config(const std::string& out, bool parallel) {
  RunConfig cfg;
  cfg.input = desk_dataset().csv.string();
  cfg.outdir = (desk_dataset().root / out).string();
  cfg.parallel = parallel;
  return cfg;
}

Outcome determinism() {
  std::string detail;
  bool ok = true;
  for (bool parallel : {false, true}) {
    std::string csv[2], manifest[2];
    for (int i = 0; i < 2; ++i) {
      const auto cfg = desk_config(fmt("det_%d_%d", parallel ? 1 : 0, i), parallel);
      write_files(cfg.outdir, execute_run(cfg).files);
      csv[i] = fixtures::read_file(fs::path(cfg.outdir) / "comparison.csv");
      manifest[i] = fixtures::read_file(fs::path(cfg.outdir) / "manifest.json");
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1] && manifest[0] == manifest[1];
    detail += fmt("%s runs %s; ", parallel ? "parallel" : "serial", same ? "identical" : "differ");
    ok = ok && same;
  }
  return pass_if(ok, detail + "outputs compared byte for byte");
}

Outcome end_to_end() {
  const auto cfg = desk_config("e2e", false);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = execute_run(cfg);
  write_files(cfg.outdir, result.files);
  const double secs = seconds_since(t0);

  const auto csv = result.files.at("comparison.csv");
  const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) - 1;
  std::map<std::string, std::size_t> kinds;
  std::size_t malformed = 0;
  for (const auto& [name, bytes] : result.files) {
    if (!name.ends_with(".svg")) continue;
    if (!fixtures::well_formed_svg(bytes)) ++malformed;
    std::string kind = name.substr(0, name.size() - 4);
    if (kind.starts_with("confusion_")) kind = "confusion_heatmap";
    else if (kind.find('-') != std::string::npos && !kind.starts_with("yield_boxplot")) kind = kind.substr(0, kind.find('-'));
    kinds[kind]++;
  }
  const std::set<std::string> expected{"metric_bars",      "confusion_heatmap",        "histogram",
                                       "density",          "boxplot",                  "scatter_matrix",
                                       "pesticide_bars",   "yield_boxplot-raw",        "yield_boxplot-normalized",
                                       "yield_boxplot_by_class"};
  std::size_t missing = 0;
  for (const auto& k : expected) missing += kinds.count(k) ? 0 : 1;
  const bool ok = secs < 120.0 && rows == 7 && malformed == 0 && missing == 0;
  return pass_if(ok, fmt("%zu rows, %zu svg kinds (%zu missing), %zu malformed, %zu files in %.2fs", rows,
                         kinds.size(), missing, malformed, result.files.size(), secs));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dataset fidelity", dataset_fidelity},
      {"naive bayes within 0.02 of the bayes limit", naive_bayes_near_bayes_limit},
      {"random forest sanity", forest_sanity},
      {"exact oracle equivalences", oracle_equivalences},
      {"labeling balance", labeling_balance},
      {"metric correctness", metric_correctness},
      {"gradient checks", gradient_checks},
      {"determinism", determinism},
      {"end-to-end desk scale", end_to_end},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::Fail) ++failures;
    std::printf("%s %zu %s: %s\n", tag, i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
