#include "activesub/stats.hpp"

#include "activesub/errors.hpp"

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>

namespace activesub {

BinomialInterval clopper_pearson(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw ArgumentError("clopper_pearson needs at least one trial");
  if (successes > trials) throw ArgumentError("successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ArgumentError("confidence must lie in (0, 1)");
  const double alpha = 1.0 - confidence;
  const auto x = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  BinomialInterval ci;
  if (successes > 0) {
    const boost::math::beta_distribution<double> lower_dist(x, n - x + 1.0);
    ci.lower = boost::math::quantile(lower_dist, alpha / 2.0);
  }
  if (successes < trials) {
    const boost::math::beta_distribution<double> upper_dist(x + 1.0, n - x);
    ci.upper = boost::math::quantile(upper_dist, 1.0 - alpha / 2.0);
  }
  return ci;
}

double empirical_quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw ArgumentError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("quantile level must lie in [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double mean(std::span<const double> samples) {
  if (samples.empty()) throw ArgumentError("mean of an empty sample");
  double sum = 0.0;
  for (double x : samples) sum += x;
  return sum / static_cast<double>(samples.size());
}

double fitted_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope fit needs >= 2 paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ArgumentError("slope fit needs distinct x values");
  return sxy / sxx;
}

}  // namespace activesub
