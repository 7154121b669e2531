#include <benchmark/benchmark.h>

#include "cropyield/classifiers.hpp"
#include "cropyield/ingest.hpp"
#include "cropyield/preprocess.hpp"
#include "cropyield/synth.hpp"

namespace {

using namespace cropyield;

SynthSpec bench_spec(std::size_t n) {
  SynthSpec s;
  s.n_samples = n;
  s.weights = {0.25, 0.25, 0.25, 0.25};
  for (int c = 0; c < 4; ++c) {
    ClassFeatures cf;
    for (std::size_t f = 0; f < cf.size(); ++f) cf[f] = {10.0 + 1.5 * c + static_cast<double>(f), 1.0};
    s.features.push_back(cf);
  }
  return s;
}

struct Fixture {
  Matrix X;
  LabelVector y;
};

Fixture make(std::size_t n) {
  const auto data = generate(bench_spec(n));
  auto fm = build_feature_matrix(data.dataset);
  return {apply_scaler(fit_scaler(fm.values), fm.values), data.labels};
}

void BM_ForestFit(benchmark::State& state) {
  const auto fx = make(static_cast<std::size_t>(state.range(0)));
  ForestConfig cfg;
  cfg.n_trees = 20;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fit_forest(fx.X, fx.y, cfg, 1));
}
BENCHMARK(BM_ForestFit)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_NaiveBayesFitPredict(benchmark::State& state) {
  const auto fx = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto m = fit_naive_bayes(fx.X, fx.y);
    benchmark::DoNotOptimize(predict_naive_bayes(m, fx.X));
  }
}
BENCHMARK(BM_NaiveBayesFitPredict)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const auto fx = make(static_cast<std::size_t>(state.range(0)));
  const auto m = fit_knn(fx.X, fx.y);
  const auto queries = fx.X.select_rows(std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  for (auto _ : state) benchmark::DoNotOptimize(predict_knn(m, queries));
}
BENCHMARK(BM_KnnPredict)->Arg(2000)->Arg(8000)->Unit(benchmark::kMicrosecond);

void BM_CsvParse(benchmark::State& state) {
  const auto text = to_csv(generate(bench_spec(static_cast<std::size_t>(state.range(0)))).dataset);
  for (auto _ : state) benchmark::DoNotOptimize(parse_csv(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_CsvParse)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
