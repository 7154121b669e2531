#include "cropyield/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "cropyield/csv.hpp"
#include "cropyield/digest.hpp"
#include "cropyield/error.hpp"
#include "cropyield/stats.hpp"

namespace cropyield {

namespace {

enum class Column { Crop, CropYear, Season, State, Area, Production, AnnualRainfall, Fertilizer, Pesticide, Yield };

constexpr std::array<std::string_view, 10> kColumnNames = {
    "Crop", "Crop_Year", "Season", "State", "Area", "Production", "Annual_Rainfall",
    "Fertilizer", "Pesticide", "Yield"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Lower-case, trimmed, inner whitespace folded to '_'.
std::string header_key(std::string_view raw) {
  std::string out;
  for (char c : trim(raw)) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(std::isspace(u) ? '_' : static_cast<char>(std::tolower(u)));
  }
  return out;
}

double parse_real(std::string_view token, std::size_t row, std::string_view column) {
  const auto t = trim(token);
  std::string_view digits = t;
  if (digits.starts_with('+')) digits.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ParseError(Errc::NumericParseError,
                     "row " + std::to_string(row) + ", column " + std::string(column) +
                         ": cannot parse '" + std::string(token) + "' as a number",
                     row, std::string(column), std::string(token));
  }
  return v;
}

int parse_year(std::string_view token, std::size_t row) {
  const auto t = trim(token);
  int y = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), y);
  if (!t.empty() && ec == std::errc{} && ptr == t.data() + t.size()) return y;
  // Accept integral decimals such as "2001.0".
  const double d = parse_real(token, row, "Crop_Year");
  if (std::isfinite(d) && d == std::trunc(d) && std::abs(d) < 1e9) return static_cast<int>(d);
  throw ParseError(Errc::NumericParseError,
                   "row " + std::to_string(row) + ", column Crop_Year: '" + std::string(token) +
                       "' is not an integer year",
                   row, "Crop_Year", std::string(token));
}

}  // namespace

std::string_view field_key(NumericField f) noexcept {
  switch (f) {
    case NumericField::Area: return "area";
    case NumericField::Production: return "production";
    case NumericField::AnnualRainfall: return "annual_rainfall";
    case NumericField::Fertilizer: return "fertilizer";
    case NumericField::Pesticide: return "pesticide";
    case NumericField::Yield: return "yield";
  }
  return "";
}

std::string_view field_column(NumericField f) noexcept {
  return kColumnNames[static_cast<std::size_t>(f) + 4];
}

double Record::value(NumericField f) const noexcept {
  switch (f) {
    case NumericField::Area: return area;
    case NumericField::Production: return production;
    case NumericField::AnnualRainfall: return annual_rainfall;
    case NumericField::Fertilizer: return fertilizer;
    case NumericField::Pesticide: return pesticide;
    case NumericField::Yield: return yield_value;
  }
  return 0.0;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Dataset parse_csv(std::string_view bytes) {
  const auto rows = csv::parse(bytes);
  if (rows.empty()) throw Error(Errc::EmptyFile, "input contains no header row");

  std::array<std::size_t, kColumnNames.size()> index{};
  for (std::size_t c = 0; c < kColumnNames.size(); ++c) {
    const auto want = header_key(kColumnNames[c]);
    const auto it = std::find_if(rows[0].begin(), rows[0].end(),
                                 [&](const std::string& h) { return header_key(h) == want; });
    if (it == rows[0].end()) {
      throw ParseError(Errc::MissingColumn, "header lacks column " + std::string(kColumnNames[c]),
                       0, std::string(kColumnNames[c]), "");
    }
    index[c] = static_cast<std::size_t>(std::distance(rows[0].begin(), it));
  }

  Dataset d;
  d.source_digest = sha256_hex(bytes);
  d.records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](Column col) -> std::string_view {
      const auto i = index[static_cast<std::size_t>(col)];
      if (i >= row.size()) {
        throw ParseError(Errc::NumericParseError,
                         "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                             " fields, missing column " +
                             std::string(kColumnNames[static_cast<std::size_t>(col)]),
                         r, std::string(kColumnNames[static_cast<std::size_t>(col)]), "");
      }
      return row[i];
    };
    auto real = [&](Column col) {
      return parse_real(cell(col), r, kColumnNames[static_cast<std::size_t>(col)]);
    };
    Record rec;
    rec.crop = std::string(trim(cell(Column::Crop)));
    rec.crop_year = parse_year(cell(Column::CropYear), r);
    rec.season = std::string(trim(cell(Column::Season)));
    rec.state = std::string(trim(cell(Column::State)));
    rec.area = real(Column::Area);
    rec.production = real(Column::Production);
    rec.annual_rainfall = real(Column::AnnualRainfall);
    rec.fertilizer = real(Column::Fertilizer);
    rec.pesticide = real(Column::Pesticide);
    rec.yield_value = real(Column::Yield);
    d.records.push_back(std::move(rec));
  }
  return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string to_csv(const Dataset& d) {
  std::string out;
  for (std::size_t c = 0; c < kColumnNames.size(); ++c) {
    if (c) out.push_back(',');
    out += kColumnNames[c];
  }
  out.push_back('\n');
  for (const auto& r : d.records) {
    out += csv::format_row({r.crop, std::to_string(r.crop_year), r.season, r.state,
                            format_double(r.area), format_double(r.production),
                            format_double(r.annual_rainfall), format_double(r.fertilizer),
                            format_double(r.pesticide), format_double(r.yield_value)});
    out.push_back('\n');
  }
  return out;
}

ValidationReport validate(const Dataset& d, const ValidationOptions& options) {
  ValidationReport report;
  report.strict = options.strict;
  constexpr double kEps = 1e-12;

  for (std::size_t i = 0; i < d.records.size(); ++i) {
    const auto& r = d.records[i];
    const std::size_t row = i + 1;
    auto hard = [&](NumericField f, std::string message) {
      report.violations.push_back({row, std::string(field_column(f)), std::move(message)});
    };

    bool all_finite = true;
    for (auto f : kNumericFields) {
      if (!std::isfinite(r.value(f))) {
        hard(f, "value is not finite");
        all_finite = false;
      }
    }
    if (std::isfinite(r.area) && r.area <= 0.0) hard(NumericField::Area, "area must be > 0");
    if (std::isfinite(r.annual_rainfall) && r.annual_rainfall <= 0.0) {
      hard(NumericField::AnnualRainfall, "annual rainfall must be > 0");
    }
    for (auto f : {NumericField::Production, NumericField::Fertilizer, NumericField::Pesticide,
                   NumericField::Yield}) {
      if (r.value(f) < 0.0) hard(f, "value must be >= 0");
    }

    if (r.crop_year < options.year_min || r.crop_year > options.year_max) {
      report.warnings.push_back({row, "Crop_Year",
                                 "year " + std::to_string(r.crop_year) + " outside [" +
                                     std::to_string(options.year_min) + ", " +
                                     std::to_string(options.year_max) + "]"});
    }
    if (all_finite && r.area > 0.0) {
      const double ratio = r.production / r.area;
      const double rel = std::abs(r.yield_value - ratio) / std::max(r.yield_value, kEps);
      if (rel > options.consistency_tolerance) {
        report.warnings.push_back({row, "Yield",
                                   "yield " + format_double(r.yield_value) +
                                       " disagrees with production/area " + format_double(ratio)});
      }
    }
  }
  return report;
}

Dataset drop_invalid_rows(const Dataset& d, const ValidationReport& report) {
  std::set<std::size_t> bad;
  for (const auto& v : report.violations) bad.insert(v.row);
  Dataset out;
  out.source_digest = d.source_digest;
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    if (!bad.contains(i + 1)) out.records.push_back(d.records[i]);
  }
  return out;
}

SummaryStats summarize(const Dataset& d) {
  if (d.empty()) throw Error(Errc::EmptyDataset, "cannot summarize an empty dataset");
  SummaryStats s;
  s.record_count = d.size();

  std::vector<double> column(d.size());
  for (std::size_t f = 0; f < kNumericFields.size(); ++f) {
    for (std::size_t i = 0; i < d.size(); ++i) column[i] = d.records[i].value(kNumericFields[f]);
    // Sorting first also makes the sums independent of record order.
    std::sort(column.begin(), column.end());
    auto& fs = s.features[f];
    fs.count = column.size();
    fs.mean = mean(column);
    fs.std_dev = std_dev(column);
    fs.min = column.front();
    fs.max = column.back();
    fs.q1 = quantile_sorted(column, 0.25);
    fs.median = quantile_sorted(column, 0.5);
    fs.q3 = quantile_sorted(column, 0.75);
  }

  std::set<std::string_view> crops, seasons, states;
  s.year_min = std::numeric_limits<int>::max();
  s.year_max = std::numeric_limits<int>::min();
  for (const auto& r : d.records) {
    crops.insert(r.crop);
    seasons.insert(r.season);
    states.insert(r.state);
    s.year_min = std::min(s.year_min, r.crop_year);
    s.year_max = std::max(s.year_max, r.crop_year);
  }
  s.distinct_crops = crops.size();
  s.distinct_seasons = seasons.size();
  s.distinct_states = states.size();
  return s;
}

AggregationTable aggregate_pesticide_by_crop_year(const Dataset& d) {
  if (d.empty()) throw Error(Errc::EmptyDataset, "cannot aggregate an empty dataset");
  std::map<std::pair<std::string, int>, double> sums;
  for (const auto& r : d.records) sums[{r.crop, r.crop_year}] += r.pesticide;
  AggregationTable table;
  table.reserve(sums.size());
  for (const auto& [key, total] : sums) table.push_back({key.first, key.second, total});
  return table;
}

nlohmann::ordered_json to_json(const SummaryStats& s) {
  nlohmann::ordered_json j;
  j["record_count"] = s.record_count;
  j["distinct_crops"] = s.distinct_crops;
  j["distinct_seasons"] = s.distinct_seasons;
  j["distinct_states"] = s.distinct_states;
  j["year_range"] = {s.year_min, s.year_max};
  nlohmann::ordered_json features = nlohmann::ordered_json::object();
  for (std::size_t f = 0; f < kNumericFields.size(); ++f) {
    const auto& fs = s.features[f];
    nlohmann::ordered_json e;
    e["count"] = fs.count;
    e["mean"] = fs.mean;
    e["min"] = fs.min;
    e["max"] = fs.max;
    e["std_dev"] = fs.std_dev;
    e["q1"] = fs.q1;
    e["median"] = fs.median;
    e["q3"] = fs.q3;
    features[std::string(field_key(kNumericFields[f]))] = std::move(e);
  }
  j["features"] = std::move(features);
  return j;
}

nlohmann::ordered_json to_json(const ValidationReport& r) {
  auto list = [](const std::vector<Finding>& findings) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
      nlohmann::ordered_json e;
      e["row"] = f.row;
      e["field"] = f.field;
      e["message"] = f.message;
      a.push_back(std::move(e));
    }
    return a;
  };
  nlohmann::ordered_json j;
  j["ok"] = r.ok();
  j["strict"] = r.strict;
  j["violation_count"] = r.violations.size();
  j["warning_count"] = r.warnings.size();
  j["violations"] = list(r.violations);
  j["warnings"] = list(r.warnings);
  return j;
}

std::string to_csv(const AggregationTable& t) {
  std::string out = "crop,crop_year,total_pesticide_kg\n";
  for (const auto& row : t) {
    out += csv::format_row({row.crop, std::to_string(row.crop_year),
                            format_double(row.total_pesticide_kg)});
    out.push_back('\n');
  }
  return out;
}

}  // namespace cropyield
