#include "cropyield/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "cropyield/error.hpp"
#include "cropyield/rng.hpp"
#include "svg.hpp"

namespace cropyield {

namespace {

constexpr std::string_view kMetricColors[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
constexpr std::string_view kMetricNames[4] = {"accuracy", "precision", "recall", "f1"};

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string_view class_color(int label, int k) {
  if (k == 2) return label == 0 ? "#1f77b4" : "#d62728";
  static constexpr std::string_view four[4] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#d62728"};
  return four[static_cast<std::size_t>(label) % 4];
}

NumericField model_feature(std::string_view name) {
  for (auto f : kNumericFields) {
    if (f != NumericField::Yield && field_key(f) == name) return f;
  }
  throw Error(Errc::UnknownFeature, "unknown feature '" + std::string(name) + "'");
}

std::vector<double> column_of(const Dataset& d, NumericField f) {
  std::vector<double> v(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) v[i] = d.records[i].value(f);
  return v;
}

nlohmann::ordered_json box_json(const BoxStats& b) {
  nlohmann::ordered_json j;
  j["count"] = b.count;
  j["q1"] = b.q1;
  j["median"] = b.median;
  j["q3"] = b.q3;
  j["whisker_low"] = b.whisker_low;
  j["whisker_high"] = b.whisker_high;
  j["outlier_count"] = b.outliers.size();
  return j;
}

// Draws a vertical box at horizontal centre `cx`.
void draw_box(svg::Document& doc, const svg::Scale& y, double cx, double width, const BoxStats& b,
              std::string_view fill) {
  doc.line(cx, y(b.whisker_low), cx, y(b.whisker_high), "#333", "class=\"whisker\"");
  doc.line(cx - width / 4, y(b.whisker_low), cx + width / 4, y(b.whisker_low));
  doc.line(cx - width / 4, y(b.whisker_high), cx + width / 4, y(b.whisker_high));
  doc.rect(cx - width / 2, y(b.q3), width, y(b.q1) - y(b.q3), fill,
           "class=\"box\" fill-opacity=\"0.6\" stroke=\"#333\"");
  doc.line(cx - width / 2, y(b.median), cx + width / 2, y(b.median), "#000", "class=\"median\"");
  for (double o : b.outliers) doc.circle(cx, y(o), 1.5, "none", "class=\"outlier\" stroke=\"#333\"");
}

std::vector<double> kde(std::span<const double> values, double h, std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * M_PI));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double s = 0.0;
    for (double v : values) {
      const double u = (grid[g] - v) / h;
      if (std::abs(u) < 8.0) s += std::exp(-0.5 * u * u);
    }
    out[g] = s * norm;
  }
  return out;
}

}  // namespace

std::string_view figure_kind_name(FigureKind kind) noexcept {
  switch (kind) {
    case FigureKind::MetricBars: return "metric_bars";
    case FigureKind::ConfusionHeatmap: return "confusion_heatmap";
    case FigureKind::Histogram: return "histogram";
    case FigureKind::Density: return "density";
    case FigureKind::Boxplot: return "boxplot";
    case FigureKind::ScatterMatrix: return "scatter_matrix";
    case FigureKind::PesticideBars: return "pesticide_bars";
    case FigureKind::YieldBoxplot: return "yield_boxplot";
    case FigureKind::YieldBoxplotByClass: return "yield_boxplot_by_class";
  }
  return "";
}

std::string FigureDoc::file_name() const {
  if (kind == FigureKind::ConfusionHeatmap && !qualifier.empty()) {
    return "confusion_" + qualifier + ".svg";
  }
  std::string name(figure_kind_name(kind));
  if (!qualifier.empty()) name += "-" + qualifier;
  return name + ".svg";
}

// ---------------------------------------------------------------------------

FigureDoc render_metric_bars(const ComparisonTable& table) {
  if (table.empty()) throw Error(Errc::EmptyTable, "no models to plot");
  FigureDoc fig;
  fig.kind = FigureKind::MetricBars;
  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (const auto& row : table) {
    const auto& m = row.report.metrics;
    nlohmann::ordered_json e;
    e["model"] = row.model;
    e["accuracy"] = m.accuracy;
    e["precision"] = m.macro_precision;
    e["recall"] = m.macro_recall;
    e["f1"] = m.macro_f1;
    models.push_back(std::move(e));
  }
  fig.payload["averaging"] = "macro";
  fig.payload["models"] = models;

  constexpr double kLeft = 70, kTop = 40, kPlotH = 300, kBar = 16, kGap = 24;
  const double group_w = 4 * kBar + kGap;
  const double plot_w = group_w * static_cast<double>(table.size());
  svg::Document doc(kLeft + plot_w + 140, kTop + kPlotH + 70, "Performance Metrics of Different Methods");
  const svg::Scale y{0.0, 1.0, kTop + kPlotH, kTop};
  svg::y_axis(doc, y, kLeft, 5, "score");
  doc.line(kLeft, y(0.0), kLeft + plot_w, y(0.0));

  for (std::size_t g = 0; g < table.size(); ++g) {
    const double x0 = kLeft + kGap / 2 + group_w * static_cast<double>(g);
    for (std::size_t b = 0; b < 4; ++b) {
      const double v = std::clamp(models[g][std::string(kMetricNames[b])].get<double>(), 0.0, 1.0);
      const double x = x0 + kBar * static_cast<double>(b);
      doc.rect(x, y(v), kBar - 2, y(0.0) - y(v), kMetricColors[b],
               "class=\"bar\" data-model=\"" + svg::escape(table[g].model) + "\" data-metric=\"" +
                   std::string(kMetricNames[b]) + "\"");
      doc.text(x + (kBar - 2) / 2, y(v) - 3, fixed3(v),
               "class=\"value\" text-anchor=\"middle\" font-size=\"7\"");
    }
    doc.text(x0 + 2 * kBar, y(0.0) + 16, table[g].model, "text-anchor=\"middle\" class=\"model\"");
  }
  for (std::size_t b = 0; b < 4; ++b) {
    const double ly = kTop + 18.0 * static_cast<double>(b);
    doc.rect(kLeft + plot_w + 20, ly, 12, 12, kMetricColors[b], "class=\"legend\"");
    doc.text(kLeft + plot_w + 38, ly + 10, kMetricNames[b]);
  }
  fig.svg = doc.str();
  return fig;
}

FigureDoc render_confusion_heatmap(const ConfusionMatrix& cm, std::string_view model,
                                   const std::vector<std::string>& class_labels) {
  if (cm.total() == 0) throw Error(Errc::EmptyMatrix, "confusion matrix has no observations");
  const int k = cm.classes();
  const double max_count = static_cast<double>(cm.max_count());

  FigureDoc fig;
  fig.kind = FigureKind::ConfusionHeatmap;
  fig.qualifier = std::string(model);
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  nlohmann::ordered_json intensity = nlohmann::ordered_json::array();
  for (int a = 0; a < k; ++a) {
    std::vector<std::size_t> row;
    std::vector<double> irow;
    for (int p = 0; p < k; ++p) {
      row.push_back(cm.at(a, p));
      irow.push_back(static_cast<double>(cm.at(a, p)) / max_count);
    }
    counts.push_back(row);
    intensity.push_back(irow);
  }
  fig.payload["model"] = std::string(model);
  fig.payload["counts"] = counts;
  fig.payload["intensity"] = intensity;

  constexpr double kLeft = 110, kTop = 50, kCell = 60;
  const double side = kCell * k;
  svg::Document doc(kLeft + side + 40, kTop + side + 60,
                    model.empty() ? "Confusion matrix" : "Confusion matrix: " + std::string(model));
  auto label = [&](int c) {
    return static_cast<std::size_t>(c) < class_labels.size() ? class_labels[static_cast<std::size_t>(c)]
                                                             : std::to_string(c);
  };
  for (int a = 0; a < k; ++a) {
    for (int p = 0; p < k; ++p) {
      const double x = kLeft + kCell * p;
      const double y = kTop + kCell * a;
      const double alpha = intensity[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)].get<double>();
      doc.rect(x, y, kCell, kCell, "#08306b",
               "class=\"cell\" data-row=\"" + std::to_string(a) + "\" data-col=\"" + std::to_string(p) +
                   "\" fill-opacity=\"" + fixed3(alpha) + "\" stroke=\"#999\"");
      doc.text(x + kCell / 2, y + kCell / 2 + 4, std::to_string(cm.at(a, p)),
               std::string("class=\"count\" text-anchor=\"middle\" fill=\"") +
                   (alpha > 0.5 ? "#ffffff" : "#000000") + "\"");
    }
    doc.text(kLeft - 8, kTop + kCell * a + kCell / 2 + 4, label(a), "text-anchor=\"end\"");
  }
  for (int p = 0; p < k; ++p) {
    doc.text(kLeft + kCell * p + kCell / 2, kTop - 8, label(p), "text-anchor=\"middle\"");
  }
  doc.text(kLeft + side / 2, kTop - 28, "Predicted", "text-anchor=\"middle\" class=\"axis-label\"");
  doc.text(20, kTop + side / 2, "Actual",
           "text-anchor=\"middle\" class=\"axis-label\" transform=\"rotate(-90 20 " +
               svg::num(kTop + side / 2) + ")\"");
  fig.svg = doc.str();
  return fig;
}

// ---------------------------------------------------------------------------

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "boxplot of an empty range");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.count = sorted.size();
  b.q1 = quantile_sorted(sorted, 0.25);
  b.median = quantile_sorted(sorted, 0.5);
  b.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
    } else {
      b.whisker_low = std::min(b.whisker_low, v);
      b.whisker_high = std::max(b.whisker_high, v);
    }
  }
  return b;
}

Histogram histogram_fd(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "histogram of an empty range");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double range = hi - lo;

  Histogram h;
  std::size_t bins = 1;
  if (range == 0.0) {
    h.rule = "single";
  } else {
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    if (iqr > 0.0) {
      h.rule = "freedman-diaconis";
      const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
      bins = static_cast<std::size_t>(std::clamp(std::ceil(range / width), 1.0,
                                                 static_cast<double>(kMaxHistogramBins)));
    } else {
      h.rule = "fixed-10";
      bins = 10;
    }
  }
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo + range * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : sorted) {
    std::size_t b = range == 0.0 ? 0
                                 : static_cast<std::size_t>((v - lo) / range * static_cast<double>(bins));
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double sd = std_dev(values);
  const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

DistributionFigures render_distributions(const Dataset& d, std::string_view feature) {
  const auto field = model_feature(feature);
  if (d.empty()) throw Error(Errc::EmptyDataset, "no records to plot");
  const auto values = column_of(d, field);
  const std::string label(field_column(field));
  DistributionFigures out;

  constexpr double kLeft = 80, kTop = 40, kW = 480, kH = 280;

  // Histogram
  {
    const auto h = histogram_fd(values);
    auto& fig = out.histogram;
    fig.kind = FigureKind::Histogram;
    fig.qualifier = std::string(feature);
    fig.payload["feature"] = std::string(feature);
    fig.payload["rule"] = h.rule;
    fig.payload["edges"] = h.edges;
    fig.payload["counts"] = h.counts;

    const auto peak = static_cast<double>(*std::max_element(h.counts.begin(), h.counts.end()));
    svg::Document doc(kLeft + kW + 30, kTop + kH + 60, "Histogram of " + label);
    const svg::Scale x{h.edges.front(), h.edges.back(), kLeft, kLeft + kW};
    const svg::Scale y{0.0, peak, kTop + kH, kTop};
    svg::y_axis(doc, y, kLeft, 5, "count");
    svg::x_axis(doc, x, kTop + kH, 4, label);
    const double bin_w = kW / static_cast<double>(h.counts.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const auto c = static_cast<double>(h.counts[b]);
      doc.rect(kLeft + bin_w * static_cast<double>(b), y(c), bin_w, y(0.0) - y(c), "#1f77b4",
               "class=\"bin\" stroke=\"#ffffff\" stroke-width=\"0.3\"");
    }
    fig.svg = doc.str();
  }

  // Density
  {
    auto& fig = out.density;
    fig.kind = FigureKind::Density;
    fig.qualifier = std::string(feature);
    const double h = silverman_bandwidth(values);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    fig.payload["feature"] = std::string(feature);
    fig.payload["bandwidth"] = h;
    svg::Document doc(kLeft + kW + 30, kTop + kH + 60, "Density of " + label);
    if (h > 0.0) {
      constexpr std::size_t kGrid = 256;
      const double g0 = *mn - 3 * h, g1 = *mx + 3 * h;
      std::vector<double> grid(kGrid);
      for (std::size_t i = 0; i < kGrid; ++i) grid[i] = g0 + (g1 - g0) * static_cast<double>(i) / (kGrid - 1);
      const auto dens = kde(values, h, grid);
      fig.payload["grid"] = grid;
      fig.payload["density"] = dens;
      const double peak = *std::max_element(dens.begin(), dens.end());
      const svg::Scale x{g0, g1, kLeft, kLeft + kW};
      const svg::Scale y{0.0, peak, kTop + kH, kTop};
      svg::y_axis(doc, y, kLeft, 4, "density");
      svg::x_axis(doc, x, kTop + kH, 4, label);
      std::vector<svg::Point> pts;
      for (std::size_t i = 0; i < kGrid; ++i) pts.push_back({x(grid[i]), y(dens[i])});
      doc.polyline(pts, "#1f77b4", "class=\"density\" stroke-width=\"1.5\"");
    } else {
      // Constant data: a point mass drawn as a spike.
      fig.payload["grid"] = std::vector<double>{*mn};
      fig.payload["density"] = std::vector<double>{1.0};
      const svg::Scale x{*mn - 1.0, *mn + 1.0, kLeft, kLeft + kW};
      const svg::Scale y{0.0, 1.0, kTop + kH, kTop};
      svg::y_axis(doc, y, kLeft, 4, "density");
      svg::x_axis(doc, x, kTop + kH, 4, label);
      doc.line(x(*mn), y(0.0), x(*mn), y(1.0), "#1f77b4", "class=\"density\" stroke-width=\"1.5\"");
    }
    fig.svg = doc.str();
  }

  // Boxplot
  {
    auto& fig = out.boxplot;
    fig.kind = FigureKind::Boxplot;
    fig.qualifier = std::string(feature);
    const auto b = box_stats(values);
    fig.payload = box_json(b);
    fig.payload["feature"] = std::string(feature);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double pad = *mx > *mn ? 0.05 * (*mx - *mn) : 1.0;
    svg::Document doc(kLeft + 240, kTop + kH + 60, "Box plot of " + label);
    const svg::Scale y{*mn - pad, *mx + pad, kTop + kH, kTop};
    svg::y_axis(doc, y, kLeft, 5, label);
    draw_box(doc, y, kLeft + 100, 60, b, "#1f77b4");
    fig.svg = doc.str();
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string crop_color(std::string_view crop) {
  const auto h = stable_hash(crop);
  const double hue = static_cast<double>(h % 3600) / 10.0;
  const double sat = 0.55 + 0.30 * static_cast<double>((h >> 16) % 100) / 100.0;
  const double light = 0.35 + 0.20 * static_cast<double>((h >> 32) % 100) / 100.0;
  // HSL -> RGB
  const double c = (1.0 - std::abs(2.0 * light - 1.0)) * sat;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = light - c / 2.0;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                static_cast<int>(std::lround((g + m) * 255)), static_cast<int>(std::lround((b + m) * 255)));
  return buf;
}

FigureDoc render_scatter_matrix(const Dataset& d, const ScatterOptions& options) {
  if (d.empty()) throw Error(Errc::EmptyDataset, "no records to plot");
  std::vector<NumericField> fields;
  for (const auto& name : options.features) fields.push_back(model_feature(name));
  const std::size_t p = fields.size();

  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (options.max_points > 0 && rows.size() > options.max_points) {
    Rng rng(options.seed, "scatter", 0);
    for (std::size_t i = 0; i < options.max_points; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(rows.size() - i));
      std::swap(rows[i], rows[j]);
    }
    rows.resize(options.max_points);
    std::sort(rows.begin(), rows.end());
  }

  std::map<std::string, std::vector<std::size_t>> by_crop;
  for (auto r : rows) by_crop[d.records[r].crop].push_back(r);

  FigureDoc fig;
  fig.kind = FigureKind::ScatterMatrix;
  fig.payload["features"] = options.features;
  fig.payload["n_points"] = rows.size();
  fig.payload["seed"] = options.seed;
  nlohmann::ordered_json crops = nlohmann::ordered_json::array();
  for (const auto& [crop, members] : by_crop) {
    crops.push_back({{"crop", crop}, {"color", crop_color(crop)}, {"points", members.size()}});
  }
  fig.payload["crops"] = crops;

  constexpr double kPanel = 150, kPad = 12, kLeft = 60, kTop = 30;
  const double side = kPanel * static_cast<double>(p);
  svg::Document doc(kLeft + side + 20, kTop + side + 40, "Scatter Plot of Key Features with Crop Categories");

  std::vector<std::pair<double, double>> range(p);
  for (std::size_t f = 0; f < p; ++f) {
    double lo = d.records[rows[0]].value(fields[f]), hi = lo;
    for (auto r : rows) {
      lo = std::min(lo, d.records[r].value(fields[f]));
      hi = std::max(hi, d.records[r].value(fields[f]));
    }
    range[f] = {lo, hi};
  }

  for (std::size_t a = 0; a < p; ++a) {      // panel row -> y feature
    for (std::size_t b = 0; b < p; ++b) {    // panel column -> x feature
      const double px = kLeft + kPanel * static_cast<double>(b);
      const double py = kTop + kPanel * static_cast<double>(a);
      doc.rect(px + 2, py + 2, kPanel - 4, kPanel - 4, "none",
               "class=\"panel\" stroke=\"#bbb\" data-row=\"" + std::to_string(a) + "\" data-col=\"" +
                   std::to_string(b) + "\"");
      const svg::Scale x{range[b].first, range[b].second, px + kPad, px + kPanel - kPad};
      if (a == b) {
        constexpr std::size_t kGrid = 64;
        std::vector<double> grid(kGrid);
        for (std::size_t i = 0; i < kGrid; ++i) {
          grid[i] = range[b].first + (range[b].second - range[b].first) * static_cast<double>(i) / (kGrid - 1);
        }
        std::vector<std::pair<std::string, std::vector<double>>> curves;
        double peak = 0.0;
        for (const auto& [crop, members] : by_crop) {
          std::vector<double> v;
          for (auto r : members) v.push_back(d.records[r].value(fields[b]));
          const double h = silverman_bandwidth(v);
          if (h <= 0.0) continue;
          auto dens = kde(v, h, grid);
          const double w = static_cast<double>(v.size()) / static_cast<double>(rows.size());
          for (auto& x_ : dens) x_ *= w;
          peak = std::max(peak, *std::max_element(dens.begin(), dens.end()));
          curves.emplace_back(crop, std::move(dens));
        }
        const svg::Scale y{0.0, peak > 0.0 ? peak : 1.0, py + kPanel - kPad, py + kPad};
        for (const auto& [crop, dens] : curves) {
          std::vector<svg::Point> pts;
          for (std::size_t i = 0; i < kGrid; ++i) pts.push_back({x(grid[i]), y(dens[i])});
          doc.polyline(pts, crop_color(crop), "class=\"density\" stroke-width=\"0.8\"");
        }
        doc.text(px + kPanel / 2, py + kPad + 2, std::string(field_column(fields[a])),
                 "text-anchor=\"middle\" class=\"feature\"");
        continue;
      }
      const svg::Scale y{range[a].first, range[a].second, py + kPanel - kPad, py + kPad};
      for (const auto& [crop, members] : by_crop) {
        const auto color = crop_color(crop);
        for (auto r : members) {
          doc.circle(x(d.records[r].value(fields[b])), y(d.records[r].value(fields[a])), 1.2, color,
                     "class=\"pt\" fill-opacity=\"0.6\"");
        }
      }
    }
  }
  fig.svg = doc.str();
  return fig;
}

FigureDoc render_pesticide_bars(const AggregationTable& table) {
  if (table.empty()) throw Error(Errc::EmptyTable, "no pesticide aggregates to plot");
  FigureDoc fig;
  fig.kind = FigureKind::PesticideBars;

  std::map<int, double> year_total;
  std::set<std::string> crop_set;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    year_total[r.crop_year] += r.total_pesticide_kg;
    crop_set.insert(r.crop);
    rows.push_back({{"crop", r.crop}, {"crop_year", r.crop_year}, {"total_pesticide_kg", r.total_pesticide_kg}});
  }
  fig.payload["rows"] = rows;

  double peak = 0.0;
  for (const auto& [year, total] : year_total) peak = std::max(peak, total);
  constexpr double kLeft = 90, kTop = 40, kH = 320, kBar = 22;
  const double plot_w = kBar * static_cast<double>(year_total.size());
  svg::Document doc(kLeft + plot_w + 200, kTop + kH + 70, "Aggregated Pesticide Usage by Crop and Year");
  const svg::Scale y{0.0, peak > 0.0 ? peak : 1.0, kTop + kH, kTop};
  svg::y_axis(doc, y, kLeft, 5, "pesticide (kg)");
  doc.line(kLeft, y(0.0), kLeft + plot_w, y(0.0));

  std::map<int, double> stacked;
  std::map<int, std::size_t> slot;
  for (const auto& [year, total] : year_total) {
    const auto s = slot.size();
    slot[year] = s;
    doc.text(kLeft + kBar * (static_cast<double>(s) + 0.5), y(0.0) + 12, std::to_string(year),
             "text-anchor=\"end\" font-size=\"8\" transform=\"rotate(-60 " +
                 svg::num(kLeft + kBar * (static_cast<double>(s) + 0.5)) + " " + svg::num(y(0.0) + 12) + ")\"");
  }
  for (const auto& r : table) {
    const double base = stacked[r.crop_year];
    const double top = base + r.total_pesticide_kg;
    stacked[r.crop_year] = top;
    const double x = kLeft + kBar * static_cast<double>(slot[r.crop_year]) + 2;
    doc.rect(x, y(top), kBar - 4, y(base) - y(top), crop_color(r.crop),
             "class=\"bar\" data-crop=\"" + svg::escape(r.crop) + "\" data-year=\"" +
                 std::to_string(r.crop_year) + "\"");
  }
  double ly = kTop;
  for (const auto& crop : crop_set) {
    doc.rect(kLeft + plot_w + 20, ly, 8, 8, crop_color(crop), "class=\"legend\"");
    doc.text(kLeft + plot_w + 32, ly + 8, crop, "font-size=\"8\"");
    ly += 10;
  }
  fig.svg = doc.str();
  return fig;
}

FigureDoc render_yield_boxplots(const NormalizedDataset& nd, YieldBoxMode mode) {
  if (mode == YieldBoxMode::ByClass && !nd.labels) {
    throw Error(Errc::MissingLabels, "class boxplots need labelled yields");
  }
  if (nd.base.empty()) throw Error(Errc::EmptyDataset, "no records to plot");

  FigureDoc fig;
  fig.kind = mode == YieldBoxMode::ByClass ? FigureKind::YieldBoxplotByClass : FigureKind::YieldBoxplot;
  if (mode == YieldBoxMode::Raw) fig.qualifier = "raw";
  if (mode == YieldBoxMode::Normalized) fig.qualifier = "normalized";

  const int k = nd.labels ? nd.n_classes : 0;
  const auto names = k > 0 ? class_names(k) : std::vector<std::string>{};

  struct Box {
    std::string crop;
    int label = -1;
    BoxStats stats;
  };
  std::map<std::string, std::vector<std::size_t>> by_crop;
  for (std::size_t i = 0; i < nd.base.size(); ++i) by_crop[nd.base.records[i].crop].push_back(i);

  auto value = [&](std::size_t i) {
    return mode == YieldBoxMode::Raw ? nd.base.records[i].yield_value : nd.normalized_yield[i];
  };
  std::vector<Box> boxes;
  for (const auto& [crop, members] : by_crop) {
    if (mode != YieldBoxMode::ByClass) {
      std::vector<double> v;
      for (auto i : members) v.push_back(value(i));
      boxes.push_back({crop, -1, box_stats(v)});
      continue;
    }
    for (int c = 0; c < k; ++c) {
      std::vector<double> v;
      for (auto i : members) {
        if ((*nd.labels)[i] == c) v.push_back(value(i));
      }
      if (!v.empty()) boxes.push_back({crop, c, box_stats(v)});
    }
  }

  double lo = 0.0, hi = 1.0;
  if (mode == YieldBoxMode::Raw) {
    hi = 0.0;
    for (const auto& r : nd.base.records) hi = std::max(hi, r.yield_value);
    if (hi <= 0.0) hi = 1.0;
  }

  nlohmann::ordered_json payload_boxes = nlohmann::ordered_json::array();
  for (const auto& b : boxes) {
    auto e = box_json(b.stats);
    e["crop"] = b.crop;
    if (b.label >= 0) {
      e["class"] = b.label;
      e["class_name"] = names[static_cast<std::size_t>(b.label)];
      e["color"] = std::string(class_color(b.label, k));
    }
    payload_boxes.push_back(std::move(e));
  }
  fig.payload["mode"] = mode == YieldBoxMode::Raw ? "raw" : mode == YieldBoxMode::Normalized ? "normalized" : "by_class";
  fig.payload["y_range"] = {lo, hi};
  fig.payload["boxes"] = payload_boxes;

  constexpr double kLeft = 80, kTop = 40, kH = 300, kSlot = 16;
  const double plot_w = std::max(400.0, kSlot * static_cast<double>(boxes.size()));
  svg::Document doc(kLeft + plot_w + 140, kTop + kH + 110,
                    mode == YieldBoxMode::Raw          ? "Yield Distribution per Crop (raw)"
                    : mode == YieldBoxMode::Normalized ? "Yield Distribution per Crop (normalized)"
                                                       : "Normalized Yield Distribution per Crop by Class");
  const svg::Scale y{lo, hi, kTop + kH, kTop};
  svg::y_axis(doc, y, kLeft, 5, mode == YieldBoxMode::Raw ? "yield" : "normalized yield");
  doc.line(kLeft, y(lo), kLeft + plot_w, y(lo));
  const double slot = plot_w / static_cast<double>(boxes.size());
  std::string last_crop;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    draw_box(doc, y, cx, std::min(slot * 0.7, 30.0), b.stats,
             b.label >= 0 ? class_color(b.label, k) : std::string_view("#1f77b4"));
    if (b.crop != last_crop) {
      doc.text(cx, y(lo) + 10, b.crop,
               "text-anchor=\"end\" font-size=\"8\" transform=\"rotate(-60 " + svg::num(cx) + " " +
                   svg::num(y(lo) + 10) + ")\"");
      last_crop = b.crop;
    }
  }
  if (k > 0) {
    for (int c = 0; c < k; ++c) {
      const double ly = kTop + 16.0 * c;
      doc.rect(kLeft + plot_w + 20, ly, 12, 12, class_color(c, k), "class=\"legend\"");
      doc.text(kLeft + plot_w + 38, ly + 10, names[static_cast<std::size_t>(c)]);
    }
  }
  fig.svg = doc.str();
  return fig;
}

}  // namespace cropyield
