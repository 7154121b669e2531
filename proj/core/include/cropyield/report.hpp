#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropyield/eval.hpp"
#include "cropyield/ingest.hpp"
#include "cropyield/preprocess.hpp"

namespace cropyield {

enum class FigureKind {
  MetricBars,
  ConfusionHeatmap,
  Histogram,
  Density,
  Boxplot,
  ScatterMatrix,
  PesticideBars,
  YieldBoxplot,
  YieldBoxplotByClass,
};

std::string_view figure_kind_name(FigureKind kind) noexcept;

/// A rendered figure. `svg` is a pure function of `payload`.
struct FigureDoc {
  FigureKind kind = FigureKind::MetricBars;
  std::string qualifier;
  nlohmann::ordered_json payload;
  std::string svg;

  /// `<kind>[-<qualifier>].svg`; confusion heatmaps use `confusion_<model>.svg`.
  std::string file_name() const;
};

/// Grouped bars, one group per model; accuracy, precision, recall, f1 in
/// blue, red, green, purple. Throws Error(EmptyTable).
FigureDoc render_metric_bars(const ComparisonTable& table);

/// Cell opacity is count / max count. Throws Error(EmptyMatrix).
FigureDoc render_confusion_heatmap(const ConfusionMatrix& cm, std::string_view model = {},
                                   const std::vector<std::string>& class_labels = {});

struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest value >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;
  std::size_t count = 0;
};

/// Throws Error(EmptyInput).
BoxStats box_stats(std::span<const double> values);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
  std::string rule;  // "freedman-diaconis", "fixed-10" or "single"
};

inline constexpr std::size_t kMaxHistogramBins = 512;

/// Freedman-Diaconis width 2 IQR n^(-1/3); 10 bins when IQR is 0; a single
/// bin when every value is equal. Bin count is capped at kMaxHistogramBins.
Histogram histogram_fd(std::span<const double> values);

/// Silverman's rule 0.9 min(sd, IQR / 1.34) n^(-1/5); falls back to the
/// non-zero spread measure, and is 0 only for constant data.
double silverman_bandwidth(std::span<const double> values);

struct DistributionFigures {
  FigureDoc histogram;
  FigureDoc density;
  FigureDoc boxplot;
};

/// `feature` is one of the five model features. Throws Error(UnknownFeature)
/// or Error(EmptyDataset).
DistributionFigures render_distributions(const Dataset& d, std::string_view feature);

/// "#rrggbb" derived from a stable hash of the crop name.
std::string crop_color(std::string_view crop);

struct ScatterOptions {
  std::vector<std::string> features = {"area", "production", "annual_rainfall", "fertilizer",
                                       "pesticide"};
  std::size_t max_points = 2000;
  std::uint64_t seed = 42;
};

/// Pairwise scatter grid coloured by crop with per-crop densities on the
/// diagonal. Rows beyond max_points are subsampled with the given seed.
FigureDoc render_scatter_matrix(const Dataset& d, const ScatterOptions& options = {});

/// Stacked bars per year, one segment per crop. Throws Error(EmptyTable).
FigureDoc render_pesticide_bars(const AggregationTable& table);

enum class YieldBoxMode { Raw, Normalized, ByClass };

/// Per-crop yield boxplots. ByClass draws one box per (crop, class) and
/// throws Error(MissingLabels) when the dataset is unlabelled.
FigureDoc render_yield_boxplots(const NormalizedDataset& nd, YieldBoxMode mode);

}  // namespace cropyield
