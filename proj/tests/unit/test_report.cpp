#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <gtest/gtest.h>

#include "cropyield/error.hpp"
#include "cropyield/report.hpp"
#include "cropyield/rng.hpp"
#include "fixtures.hpp"
#include "svg_check.hpp"

using namespace cropyield;
using fixtures::record;
using fixtures::svg_elements;
using fixtures::with_class;

namespace {

ComparisonRow scored(const std::string& name, const LabelVector& truth, const LabelVector& pred, int k) {
  ComparisonRow r{name, {}};
  r.report.confusion = confusion_matrix(truth, pred, k);
  r.report.metrics = metrics_from_cm(r.report.confusion);
  return r;
}

ComparisonTable seven_models() {
  Rng rng(3);
  LabelVector truth;
  for (int i = 0; i < 40; ++i) truth.push_back(i % 4);
  std::vector<ComparisonRow> rows;
  for (auto kind : kAllModelKinds) {
    LabelVector pred = truth;
    for (auto& p : pred) {
      if (rng.uniform() < 0.3) p = static_cast<int>(rng.below(4));
    }
    rows.push_back(scored(std::string(model_name(kind)), truth, pred, 4));
  }
  return compare_models(rows);
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

Dataset spread_dataset(std::size_t n, std::uint64_t seed, int crops) {
  Rng rng(seed);
  std::vector<Record> rs;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = record("Crop" + std::to_string(i % static_cast<std::size_t>(crops)), 1.0 + rng.uniform() * 5,
                    10.0 + rng.uniform() * 100, 1.0 + rng.uniform(), 2000 + static_cast<int>(i % 3));
    r.annual_rainfall = 1000 + 400 * rng.normal();
    r.fertilizer = 50 + 5 * rng.normal();
    rs.push_back(r);
  }
  return fixtures::dataset(rs);
}

double num(const fixtures::SvgElement& e, const std::string& key) { return std::stod(e.attr(key)); }

}  // namespace

TEST(MetricBars, SevenModelsGiveTwentyEightBars) {
  const auto fig = render_metric_bars(seven_models());
  const auto els = svg_elements(fig.svg);
  const auto bars = with_class(els, "bar");
  ASSERT_EQ(bars.size(), 28u);
  const std::string colors[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const std::string metrics[4] = {"accuracy", "precision", "recall", "f1"};
  for (std::size_t i = 0; i < bars.size(); ++i) {
    EXPECT_EQ(bars[i].attr("fill"), colors[i % 4]);
    EXPECT_EQ(bars[i].attr("data-metric"), metrics[i % 4]);
  }
  EXPECT_EQ(bars[0].attr("data-model"), "logistic");
  EXPECT_EQ(bars[27].attr("data-model"), "boosting");
  EXPECT_EQ(fig.file_name(), "metric_bars.svg");
  EXPECT_EQ(fig.payload["averaging"], "macro");
}

TEST(MetricBars, PerfectModelGivesFullHeightBars) {
  const LabelVector y{0, 1, 2, 3};
  const auto fig = render_metric_bars(compare_models({scored("tree", y, y, 4)}));
  const auto bars = with_class(svg_elements(fig.svg), "bar");
  ASSERT_EQ(bars.size(), 4u);
  for (const auto& b : bars) EXPECT_DOUBLE_EQ(num(b, "height"), num(bars[0], "height"));
  EXPECT_GT(num(bars[0], "height"), 0.0);
  // Full height means the bar top sits on the 1.0 tick.
  EXPECT_DOUBLE_EQ(num(bars[0], "y"), 40.0);
}

TEST(MetricBars, AnnotationsMatchPayloadAndDeterministic) {
  const auto table = seven_models();
  const auto fig = render_metric_bars(table);
  const auto values = with_class(svg_elements(fig.svg), "value");
  ASSERT_EQ(values.size(), 28u);
  std::size_t i = 0;
  for (const auto& m : fig.payload["models"]) {
    for (const char* key : {"accuracy", "precision", "recall", "f1"}) {
      EXPECT_EQ(values[i++].text, fixed3(m[key].get<double>()));
    }
  }
  EXPECT_EQ(render_metric_bars(table).svg, fig.svg);
  EXPECT_THROW(render_metric_bars({}), Error);
}

TEST(Heatmap, IdentityMatrix) {
  const LabelVector y{0, 1, 2, 3};
  const auto cells = with_class(svg_elements(render_confusion_heatmap(confusion_matrix(y, y, 4)).svg), "cell");
  ASSERT_EQ(cells.size(), 16u);
  for (const auto& c : cells) {
    EXPECT_EQ(c.attr("fill-opacity"), c.attr("data-row") == c.attr("data-col") ? "1.000" : "0.000");
  }
}

TEST(Heatmap, UniformMatrixHasEqualIntensity) {
  ConfusionMatrix cm(3);
  for (int a = 0; a < 3; ++a) {
    for (int p = 0; p < 3; ++p) cm.add(a, p, 5);
  }
  for (const auto& c : with_class(svg_elements(render_confusion_heatmap(cm).svg), "cell")) {
    EXPECT_EQ(c.attr("fill-opacity"), "1.000");
  }
}

TEST(Heatmap, MaxCountCellIsDarkest) {
  const auto cm = confusion_matrix(LabelVector{0, 0, 1, 1}, LabelVector{0, 1, 1, 1}, 2);
  const auto fig = render_confusion_heatmap(cm, "knn");
  EXPECT_EQ(fig.file_name(), "confusion_knn.svg");
  const auto els = svg_elements(fig.svg);
  const auto cells = with_class(els, "cell");
  double best = -1;
  std::string where;
  for (const auto& c : cells) {
    if (num(c, "fill-opacity") > best) {
      best = num(c, "fill-opacity");
      where = c.attr("data-row") + "," + c.attr("data-col");
    }
  }
  EXPECT_EQ(where, "1,1");
  const auto counts = with_class(els, "count");
  ASSERT_EQ(counts.size(), 4u);
  EXPECT_EQ(counts[0].text, "1");
  EXPECT_EQ(counts[1].text, "1");
  EXPECT_EQ(counts[2].text, "0");
  EXPECT_EQ(counts[3].text, "2");
  std::set<std::string> labels;
  for (const auto& e : with_class(els, "axis-label")) labels.insert(e.text);
  EXPECT_EQ(labels, (std::set<std::string>{"Actual", "Predicted"}));
  EXPECT_THROW(render_confusion_heatmap(ConfusionMatrix(2)), Error);
}

TEST(Distributions, BoxStatsOfOneToHundred) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const auto b = box_stats(v);
  EXPECT_DOUBLE_EQ(b.median, 50.5);
  EXPECT_DOUBLE_EQ(b.q1, 25.75);
  EXPECT_DOUBLE_EQ(b.q3, 75.25);
  EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
  EXPECT_DOUBLE_EQ(b.whisker_high, 100.0);
  EXPECT_TRUE(b.outliers.empty());
}

TEST(Distributions, BoxStatsOutliers) {
  const auto b = box_stats(std::vector<double>{1, 2, 3, 4, 100});
  EXPECT_EQ(b.outliers, (std::vector<double>{100}));
  EXPECT_DOUBLE_EQ(b.whisker_high, 4.0);
}

TEST(Distributions, ConstantFeatureIsDegenerate) {
  std::vector<Record> rs(20, record("Rice", 2.0));
  const auto figs = render_distributions(fixtures::dataset(rs), "area");
  EXPECT_EQ(figs.histogram.payload["rule"], "single");
  EXPECT_EQ(figs.histogram.payload["counts"], nlohmann::ordered_json::array({20}));
  EXPECT_EQ(figs.boxplot.payload["q1"], figs.boxplot.payload["q3"]);
  EXPECT_EQ(figs.density.payload["bandwidth"], 0.0);
  for (const auto* f : {&figs.histogram, &figs.density, &figs.boxplot}) EXPECT_TRUE(fixtures::well_formed_svg(f->svg));
}

TEST(Distributions, FreedmanDiaconisOracle) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v;
    const std::size_t n = 10 + rng.below(500);
    for (std::size_t i = 0; i < n; ++i) v.push_back(rng.normal() * 10);
    auto s = v;
    std::sort(s.begin(), s.end());
    auto q = [&](double p) {
      const double h = (s.size() - 1) * p;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      return s[lo] + (h - lo) * (s[std::min(lo + 1, s.size() - 1)] - s[lo]);
    };
    const double width = 2 * (q(0.75) - q(0.25)) / std::cbrt(static_cast<double>(n));
    const auto h = histogram_fd(v);
    EXPECT_EQ(h.rule, "freedman-diaconis");
    EXPECT_EQ(h.counts.size(), static_cast<std::size_t>(std::ceil((s.back() - s.front()) / width)));
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    EXPECT_EQ(total, n);
    EXPECT_EQ(h.edges.front(), s.front());
    EXPECT_EQ(h.edges.back(), s.back());
  }
}

TEST(Distributions, ZeroIqrUsesTenBins) {
  std::vector<double> v(20, 1.0);
  v.push_back(5.0);
  const auto h = histogram_fd(v);
  EXPECT_EQ(h.rule, "fixed-10");
  EXPECT_EQ(h.counts.size(), 10u);
}

TEST(Distributions, LogNormalModeInLowestQuartileOfRange) {
  Rng rng(8);
  std::vector<Record> rs;
  for (int i = 0; i < 2000; ++i) {
    auto r = record("Rice", 1.0);
    r.pesticide = std::exp(rng.normal());
    rs.push_back(r);
  }
  const auto figs = render_distributions(fixtures::dataset(rs), "pesticide");
  const auto counts = figs.histogram.payload["counts"].get<std::vector<std::size_t>>();
  const auto edges = figs.histogram.payload["edges"].get<std::vector<double>>();
  const auto mode = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const double centre = (edges[mode] + edges[mode + 1]) / 2;
  EXPECT_LT(centre, edges.front() + 0.25 * (edges.back() - edges.front()));
  EXPECT_EQ(with_class(svg_elements(figs.histogram.svg), "bin").size(), counts.size());
}

TEST(Distributions, SilvermanBandwidth) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  // sd (population) = 28.866; IQR / 1.34 = 36.94; min is sd.
  double mean = 50.5, ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 100);
  const double expected = 0.9 * std::min(sd, 49.5 / 1.34) * std::pow(100.0, -0.2);
  EXPECT_NEAR(silverman_bandwidth(v), expected, 1e-9 * expected + 0.02 * expected);
  EXPECT_EQ(silverman_bandwidth(std::vector<double>{3, 3, 3}), 0.0);
}

TEST(Distributions, UnknownFeature) {
  const auto d = fixtures::dataset({record("Rice", 1.0)});
  try {
    render_distributions(d, "yield");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownFeature);
  }
}

TEST(ScatterMatrix, TwentyFivePanelsAndTwoColors) {
  const auto d = spread_dataset(200, 1, 2);
  const auto fig = render_scatter_matrix(d);
  const auto els = svg_elements(fig.svg);
  EXPECT_EQ(with_class(els, "panel").size(), 25u);
  std::set<std::string> colors;
  for (const auto& p : with_class(els, "pt")) colors.insert(p.attr("fill"));
  EXPECT_EQ(colors, (std::set<std::string>{crop_color("Crop0"), crop_color("Crop1")}));
  EXPECT_EQ(with_class(els, "pt").size(), 200u * 20u);
}

TEST(ScatterMatrix, TwoFeaturesGiveFourPanels) {
  ScatterOptions opt;
  opt.features = {"area", "pesticide"};
  EXPECT_EQ(with_class(svg_elements(render_scatter_matrix(spread_dataset(50, 2, 3), opt).svg), "panel").size(), 4u);
}

TEST(ScatterMatrix, SeededSubsample) {
  const auto d = spread_dataset(500, 3, 4);
  ScatterOptions opt;
  opt.max_points = 100;
  const auto a = render_scatter_matrix(d, opt);
  EXPECT_EQ(a.payload["n_points"], 100);
  EXPECT_EQ(render_scatter_matrix(d, opt).svg, a.svg);
  opt.seed = 7;
  EXPECT_NE(render_scatter_matrix(d, opt).svg, a.svg);
}

TEST(CropColor, StableHex) {
  const auto c = crop_color("Rice");
  EXPECT_EQ(c, crop_color("Rice"));
  EXPECT_EQ(c.size(), 7u);
  EXPECT_EQ(c[0], '#');
  EXPECT_NE(crop_color("Rice"), crop_color("Wheat"));
}

TEST(PesticideBars, OneSegmentPerRow) {
  const auto table = aggregate_pesticide_by_crop_year(spread_dataset(60, 5, 3));
  const auto fig = render_pesticide_bars(table);
  EXPECT_EQ(with_class(svg_elements(fig.svg), "bar").size(), table.size());
  EXPECT_EQ(fig.file_name(), "pesticide_bars.svg");
  EXPECT_THROW(render_pesticide_bars({}), Error);
}

TEST(YieldBoxplots, NormalizedStaysInUnitRange) {
  const auto nd = normalize_yield_per_crop(spread_dataset(100, 6, 3));
  const auto fig = render_yield_boxplots(nd, YieldBoxMode::Normalized);
  EXPECT_EQ(fig.payload["y_range"], nlohmann::ordered_json::array({0.0, 1.0}));
  for (const auto& b : fig.payload["boxes"]) {
    for (const char* key : {"q1", "median", "q3", "whisker_low", "whisker_high"}) {
      EXPECT_GE(b[key].get<double>(), 0.0);
      EXPECT_LE(b[key].get<double>(), 1.0);
    }
  }
  // Plot band for [0, 1] spans y = 40 (top) to y = 340 (bottom).
  for (const auto& e : svg_elements(fig.svg)) {
    if (e.has_class("box")) {
      EXPECT_GE(num(e, "y"), 40.0 - 1e-9);
      EXPECT_LE(num(e, "y") + num(e, "height"), 340.0 + 1e-9);
    }
    if (e.has_class("whisker") || e.has_class("median")) {
      for (const char* k : {"y1", "y2"}) {
        EXPECT_GE(num(e, k), 40.0 - 1e-9);
        EXPECT_LE(num(e, k), 340.0 + 1e-9);
      }
    }
  }
  EXPECT_EQ(fig.file_name(), "yield_boxplot-normalized.svg");
}

TEST(YieldBoxplots, TwoPointCropSpansFullAxis) {
  const auto nd = normalize_yield_per_crop(fixtures::dataset({record("Rice", 3.0), record("Rice", 9.0)}));
  const auto fig = render_yield_boxplots(nd, YieldBoxMode::Normalized);
  const auto& box = fig.payload["boxes"][0];
  EXPECT_EQ(box["whisker_low"], 0.0);
  EXPECT_EQ(box["whisker_high"], 1.0);
}

TEST(YieldBoxplots, ByClassTwoCropsTwoClasses) {
  std::vector<Record> rs;
  for (int i = 0; i < 8; ++i) {
    rs.push_back(record("Rice", 1.0 + i));
    rs.push_back(record("Wheat", 10.0 + 3 * i));
  }
  auto nd = label_yield_classes(normalize_yield_per_crop(fixtures::dataset(rs)), {2, false});
  const auto fig = render_yield_boxplots(nd, YieldBoxMode::ByClass);
  const auto boxes = with_class(svg_elements(fig.svg), "box");
  ASSERT_EQ(boxes.size(), 4u);
  int blue = 0, red = 0;
  for (const auto& b : boxes) {
    blue += b.attr("fill") == "#1f77b4";
    red += b.attr("fill") == "#d62728";
  }
  EXPECT_EQ(blue, 2);
  EXPECT_EQ(red, 2);
  EXPECT_EQ(fig.file_name(), "yield_boxplot_by_class.svg");
  EXPECT_EQ(fig.payload["boxes"][0]["class_name"], "Low");
}

TEST(YieldBoxplots, ByClassNeedsLabels) {
  const auto nd = normalize_yield_per_crop(fixtures::dataset({record("Rice", 1.0)}));
  try {
    render_yield_boxplots(nd, YieldBoxMode::ByClass);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingLabels);
  }
}

TEST(Figures, PropertyAllWellFormedAndDeterministic) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto d = spread_dataset(150, seed, 4);
    auto nd = label_yield_classes(normalize_yield_per_crop(d), {4, false});
    std::vector<FigureDoc> figs{render_metric_bars(seven_models()),
                                render_scatter_matrix(d),
                                render_pesticide_bars(aggregate_pesticide_by_crop_year(d)),
                                render_yield_boxplots(nd, YieldBoxMode::Raw),
                                render_yield_boxplots(nd, YieldBoxMode::ByClass)};
    for (const auto& f : {"area", "production", "annual_rainfall", "fertilizer", "pesticide"}) {
      auto t = render_distributions(d, f);
      figs.push_back(t.histogram);
      figs.push_back(t.density);
      figs.push_back(t.boxplot);
      EXPECT_EQ(render_distributions(d, f).density.svg, t.density.svg);
    }
    for (const auto& f : figs) {
      EXPECT_TRUE(fixtures::well_formed_svg(f.svg)) << f.file_name();
      EXPECT_EQ(f.svg.find("NaN"), std::string::npos);
      EXPECT_EQ(f.svg.find("nan"), std::string::npos);
    }
  }
}
