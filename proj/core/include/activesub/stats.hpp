#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace activesub {

struct BinomialInterval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Exact (Clopper-Pearson) two-sided interval for a binomial rate after
/// `successes` out of `trials`. lower = 0 when successes = 0 and upper = 1
/// when successes = trials.
BinomialInterval clopper_pearson(std::size_t successes, std::size_t trials,
                                 double confidence = 0.95);

/// Empirical p-quantile, inverse-CDF definition: the smallest sample x with
/// #{x_i <= x} >= p * N. Throws ArgumentError on empty input or p outside [0, 1].
double empirical_quantile(std::span<const double> samples, double p);

double mean(std::span<const double> samples);

/// Least-squares slope of y against x.
double fitted_slope(std::span<const double> x, std::span<const double> y);

}  // namespace activesub
