#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace cropyield {

/// The numeric measures of a record, in file order.
enum class NumericField { Area, Production, AnnualRainfall, Fertilizer, Pesticide, Yield };

inline constexpr std::array<NumericField, 6> kNumericFields = {
    NumericField::Area,       NumericField::Production, NumericField::AnnualRainfall,
    NumericField::Fertilizer, NumericField::Pesticide,  NumericField::Yield};

/// snake_case key, e.g. "annual_rainfall".
std::string_view field_key(NumericField f) noexcept;
/// CSV header spelling, e.g. "Annual_Rainfall".
std::string_view field_column(NumericField f) noexcept;

struct Record {
  std::string crop;
  int crop_year = 0;
  std::string season;
  std::string state;
  double area = 0.0;
  double production = 0.0;
  double annual_rainfall = 0.0;
  double fertilizer = 0.0;
  double pesticide = 0.0;
  double yield_value = 0.0;

  double value(NumericField f) const noexcept;

  friend bool operator==(const Record&, const Record&) = default;
};

struct Dataset {
  std::vector<Record> records;  // input file order
  std::string source_digest;    // sha256 of the raw input bytes

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

/// Parses crop-yield CSV bytes. Throws ParseError (MissingColumn,
/// NumericParseError) or Error(EmptyFile).
Dataset parse_csv(std::string_view bytes);

/// Reads and parses a file. Throws Error(IoError) when unreadable.
Dataset read_dataset(const std::filesystem::path& path);

/// Re-emits the ten canonical columns; numbers are written with enough
/// digits to parse back to the same double.
std::string to_csv(const Dataset& d);

struct Finding {
  std::size_t row = 0;  // 1-based data row
  std::string field;
  std::string message;
};

struct ValidationOptions {
  int year_min = 1997;
  int year_max = 2020;
  double consistency_tolerance = 0.5;
  bool strict = false;
};

struct ValidationReport {
  std::vector<Finding> violations;  // hard
  std::vector<Finding> warnings;    // soft
  bool strict = false;

  /// True when nothing blocks the run: no violations, and no warnings
  /// either in strict mode.
  bool ok() const noexcept { return violations.empty() && (!strict || warnings.empty()); }
};

ValidationReport validate(const Dataset& d, const ValidationOptions& options = {});

/// Keeps only rows without hard violations. Order is preserved.
Dataset drop_invalid_rows(const Dataset& d, const ValidationReport& report);

struct FeatureStats {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std_dev = 0.0;  // population
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct SummaryStats {
  std::size_t record_count = 0;
  std::array<FeatureStats, kNumericFields.size()> features{};  // indexed like kNumericFields
  std::size_t distinct_crops = 0;
  std::size_t distinct_seasons = 0;
  std::size_t distinct_states = 0;
  int year_min = 0;
  int year_max = 0;

  const FeatureStats& feature(NumericField f) const noexcept {
    return features[static_cast<std::size_t>(f)];
  }
};

/// Throws Error(EmptyDataset).
SummaryStats summarize(const Dataset& d);

struct AggregationRow {
  std::string crop;
  int crop_year = 0;
  double total_pesticide_kg = 0.0;

  friend bool operator==(const AggregationRow&, const AggregationRow&) = default;
};
using AggregationTable = std::vector<AggregationRow>;

/// Summed pesticide per (crop, year), sorted by crop then year.
AggregationTable aggregate_pesticide_by_crop_year(const Dataset& d);

nlohmann::ordered_json to_json(const SummaryStats& s);
nlohmann::ordered_json to_json(const ValidationReport& r);
/// Header `crop,crop_year,total_pesticide_kg`.
std::string to_csv(const AggregationTable& t);

/// Shortest decimal that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace cropyield
