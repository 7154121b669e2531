#pragma once

#include <span>

namespace cropyield {

/// Linear-interpolation quantile over order statistics: with v sorted and
/// h = p * (n - 1), returns v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
/// Throws Error(EmptyInput) on an empty range.
double quantile(std::span<const double> values, double p);

/// Same estimator over an already ascending-sorted range.
double quantile_sorted(std::span<const double> sorted, double p);

double mean(std::span<const double> values);

/// Population standard deviation.
double std_dev(std::span<const double> values);

}  // namespace cropyield
