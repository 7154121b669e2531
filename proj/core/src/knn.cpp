#include <algorithm>
#include <cmath>
#include <numeric>

#include "cropyield/classifiers.hpp"
#include "model_common.hpp"

namespace cropyield {

KnnModel fit_knn(const Matrix& X, std::span<const int> y, const KnnConfig& cfg) {
  const int k = detail::check_training_data(X, y);
  if (cfg.k == 0) throw Error(Errc::InvalidConfig, "knn.k must be >= 1");
  if (cfg.k > X.rows()) {
    throw Error(Errc::KTooLarge, "k = " + std::to_string(cfg.k) + " exceeds " +
                                     std::to_string(X.rows()) + " training samples");
  }
  return KnnModel{X.cols(), k, cfg, X, LabelVector(y.begin(), y.end())};
}

Predictions predict_knn(const KnnModel& m, const Matrix& X) {
  detail::check_columns(m.n_features, X);
  const std::size_t n = m.train.rows();
  const std::size_t k = m.config.k;
  const auto kc = static_cast<std::size_t>(m.n_classes);

  Predictions out(X.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t q = 0; q < X.rows(); ++q) {
    const auto x = X.row(q);
    for (std::size_t i = 0; i < n; ++i) {
      const auto t = m.train.row(i);
      double d = 0.0;
      if (m.config.metric == DistanceMetric::Euclidean) {
        for (std::size_t j = 0; j < x.size(); ++j) d += (x[j] - t[j]) * (x[j] - t[j]);
        d = std::sqrt(d);
      } else {
        for (std::size_t j = 0; j < x.size(); ++j) d += std::abs(x[j] - t[j]);
      }
      dist[i] = {d, i};
    }
    // (distance, row) ordering breaks distance ties toward the lower row.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<std::size_t> votes(kc, 0);
    for (std::size_t r = 0; r < k; ++r) ++votes[static_cast<std::size_t>(m.labels[dist[r].second])];
    const auto top = *std::max_element(votes.begin(), votes.end());

    auto& pred = out[q];
    // Vote ties go to the tied class whose member is nearest.
    for (std::size_t r = 0; r < k; ++r) {
      const int c = m.labels[dist[r].second];
      if (votes[static_cast<std::size_t>(c)] == top) {
        pred.label = c;
        break;
      }
    }
    pred.scores.resize(kc);
    for (std::size_t c = 0; c < kc; ++c) {
      pred.scores[c] = static_cast<double>(votes[c]) / static_cast<double>(k);
    }
  }
  return out;
}

}  // namespace cropyield
