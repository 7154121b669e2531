#include "cropyield/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "cropyield/csv.hpp"
#include "cropyield/error.hpp"
#include "cropyield/rng.hpp"

namespace cropyield {

namespace {

std::map<std::string, std::vector<std::size_t>> group_by_crop(const Dataset& d) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < d.size(); ++i) groups[d.records[i].crop].push_back(i);
  return groups;
}

int count_above(double v, std::span<const double> thresholds) {
  int label = 0;
  for (double t : thresholds) label += v > t ? 1 : 0;
  return label;
}

}  // namespace

std::vector<std::string> class_names(int k) {
  if (k == 2) return {"Low", "High"};
  if (k == 4) return {"Low", "Medium", "High", "Very High"};
  throw Error(Errc::InvalidConfig, "class count must be 2 or 4, got " + std::to_string(k));
}

NormalizedDataset normalize_yield_per_crop(const Dataset& d) {
  NormalizedDataset nd;
  nd.base = d;
  nd.normalized_yield.assign(d.size(), 0.5);
  for (const auto& [crop, members] : group_by_crop(d)) {
    double lo = d.records[members.front()].yield_value;
    double hi = lo;
    for (auto i : members) {
      lo = std::min(lo, d.records[i].yield_value);
      hi = std::max(hi, d.records[i].yield_value);
    }
    if (hi == lo) continue;
    const double range = hi - lo;
    for (auto i : members) {
      nd.normalized_yield[i] = std::clamp((d.records[i].yield_value - lo) / range, 0.0, 1.0);
    }
  }
  return nd;
}

std::vector<double> class_thresholds(std::span<const double> normalized, int k) {
  std::vector<double> sorted(normalized.begin(), normalized.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> thresholds;
  for (int j = 1; j < k; ++j) {
    thresholds.push_back(quantile_sorted(sorted, static_cast<double>(j) / k));
  }
  return thresholds;
}

NormalizedDataset label_yield_classes(NormalizedDataset nd, const LabelOptions& options) {
  (void)class_names(options.k);
  const auto n = nd.normalized_yield.size();
  if (n < static_cast<std::size_t>(options.k)) {
    throw Error(Errc::TooFewSamples, "need at least " + std::to_string(options.k) +
                                         " records to form classes, got " + std::to_string(n));
  }
  LabelVector labels(n, 0);
  if (!options.per_crop) {
    const auto thresholds = class_thresholds(nd.normalized_yield, options.k);
    for (std::size_t i = 0; i < n; ++i) labels[i] = count_above(nd.normalized_yield[i], thresholds);
  } else {
    for (const auto& [crop, members] : group_by_crop(nd.base)) {
      std::vector<double> group;
      for (auto i : members) group.push_back(nd.normalized_yield[i]);
      const auto thresholds = class_thresholds(group, options.k);
      for (auto i : members) labels[i] = count_above(nd.normalized_yield[i], thresholds);
    }
  }
  nd.labels = std::move(labels);
  nd.n_classes = options.k;
  return nd;
}

std::string to_csv(const NormalizedDataset& nd) {
  const auto base = to_csv(nd.base);
  std::string out;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < base.size()) {
    const auto eol = base.find('\n', pos);
    out.append(base, pos, eol - pos);
    if (row == 0) {
      out += ",yield_norm,yield_class_int";
    } else {
      const auto i = row - 1;
      out += "," + format_double(nd.normalized_yield[i]) + ",";
      if (nd.labels) out += std::to_string((*nd.labels)[i]);
    }
    out.push_back('\n');
    pos = eol + 1;
    ++row;
  }
  return out;
}

FeatureMatrix build_feature_matrix(const Dataset& d, const FeatureSpec& spec) {
  struct Block {
    std::optional<NumericField> numeric;
    std::string categorical;
    std::vector<std::string> levels;
  };
  auto text_of = [](const Record& r, std::string_view name) -> const std::string& {
    if (name == "crop") return r.crop;
    if (name == "season") return r.season;
    return r.state;
  };

  std::vector<Block> blocks;
  FeatureMatrix fm;
  for (const auto& name : spec.features) {
    Block b;
    for (auto f : kNumericFields) {
      if (f != NumericField::Yield && field_key(f) == name) b.numeric = f;
    }
    if (b.numeric) {
      fm.column_names.push_back(name);
    } else if (name == "crop" || name == "season" || name == "state") {
      std::set<std::string> levels;
      for (const auto& r : d.records) levels.insert(text_of(r, name));
      b.categorical = name;
      b.levels.assign(levels.begin(), levels.end());
      for (const auto& level : b.levels) fm.column_names.push_back(name + "=" + level);
    } else {
      throw Error(Errc::UnknownFeature, "unknown feature '" + name + "'");
    }
    blocks.push_back(std::move(b));
  }

  fm.values = Matrix(d.size(), fm.column_names.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& r = d.records[i];
    auto row = fm.values.row(i);
    std::size_t c = 0;
    for (const auto& b : blocks) {
      if (b.numeric) {
        row[c++] = r.value(*b.numeric);
        continue;
      }
      const auto& v = text_of(r, b.categorical);
      const auto it = std::lower_bound(b.levels.begin(), b.levels.end(), v);
      row[c + static_cast<std::size_t>(it - b.levels.begin())] = 1.0;
      c += b.levels.size();
    }
  }
  return fm;
}

Scaler fit_scaler(const Matrix& train) {
  if (train.empty()) throw Error(Errc::EmptyInput, "cannot fit a scaler on zero rows");
  Scaler s;
  const auto first = train.row(0);
  s.min.assign(first.begin(), first.end());
  s.max.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < train.rows(); ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < train.cols(); ++c) {
      s.min[c] = std::min(s.min[c], row[c]);
      s.max[c] = std::max(s.max[c], row[c]);
    }
  }
  return s;
}

Matrix apply_scaler(const Scaler& s, const Matrix& m) {
  if (m.cols() != s.min.size()) {
    throw Error(Errc::DimensionMismatch, "scaler has " + std::to_string(s.min.size()) +
                                             " columns, matrix has " + std::to_string(m.cols()));
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double range = s.max[c] - s.min[c];
      out(r, c) = range > 0.0 ? std::clamp((m(r, c) - s.min[c]) / range, 0.0, 1.0) : 0.5;
    }
  }
  return out;
}

SplitIndices split(std::span<const int> labels, const SplitSpec& spec) {
  const auto n = labels.size();
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "train_fraction must lie in (0, 1)");
  }
  if (n < 2) throw Error(Errc::TooFewSamples, "split needs at least 2 samples");
  const auto target = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));

  SplitIndices out;
  if (!spec.stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.seed, "split", 0);
    rng.shuffle(std::span(order));
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(target), order.end());
  } else {
    int max_label = -1;
    for (int y : labels) {
      if (y < 0) throw Error(Errc::LabelOutOfRange, "negative class label");
      max_label = std::max(max_label, y);
    }
    const auto k = static_cast<std::size_t>(max_label + 1);
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

    std::vector<std::size_t> quota(k);
    std::size_t total = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (members[c].empty()) {
        throw Error(Errc::EmptyClass, "class " + std::to_string(c) + " has no samples");
      }
      quota[c] = static_cast<std::size_t>(
          std::llround(spec.train_fraction * static_cast<double>(members[c].size())));
      total += quota[c];
    }

    // Reconcile to the global count, visiting classes largest first.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return members[a].size() > members[b].size();
    });
    for (std::size_t step = 0; total != target && step < 4 * n + k; ++step) {
      const auto c = order[step % k];
      if (total > target && quota[c] > 0) {
        --quota[c];
        --total;
      } else if (total < target && quota[c] < members[c].size()) {
        ++quota[c];
        ++total;
      }
    }

    for (std::size_t c = 0; c < k; ++c) {
      Rng rng(spec.seed, "split", c);
      rng.shuffle(std::span(members[c]));
      out.train.insert(out.train.end(), members[c].begin(),
                       members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
      out.test.insert(out.test.end(),
                      members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]),
                      members[c].end());
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace cropyield
