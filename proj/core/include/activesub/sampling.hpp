#pragma once

#include "activesub/rng.hpp"
#include "activesub/spectral.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace activesub {

/// Relative slack on the online check ||grad f(x)||_2 <= L.
inline constexpr double kGradientBoundTolerance = 1e-12;

using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using PointSampler = std::function<Eigen::VectorXd(Rng&)>;

/// A differentiable f: R^m -> R together with the density rho its inputs are
/// drawn from, a bound L on ||grad f||_2 over the support of rho, and
/// optionally the exact sensitivity matrix E = E[grad f grad f^T].
class SampledFunction {
 public:
  /// Throws ArgumentError if L is not positive, if analytic_E has the wrong
  /// dimension, is not PSD, or has ||E||_2 > L^2.
  SampledFunction(std::size_t dim, GradientFn gradient, PointSampler sampler, double lipschitz_L,
                  std::optional<SymmetricMatrix> analytic_E, nlohmann::ordered_json description);

  std::size_t dim() const noexcept { return dim_; }
  double lipschitz_L() const noexcept { return lipschitz_L_; }
  const std::optional<SymmetricMatrix>& analytic_E() const noexcept { return analytic_E_; }
  /// JSON function specification this object was built from.
  const nlohmann::ordered_json& description() const noexcept { return description_; }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return gradient_(x); }
  Eigen::VectorXd sample_point(Rng& rng) const { return sampler_(rng); }

 private:
  std::size_t dim_;
  GradientFn gradient_;
  PointSampler sampler_;
  double lipschitz_L_;
  std::optional<SymmetricMatrix> analytic_E_;
  nlohmann::ordered_json description_;
};

/// n gradient samples z_j, stored one per row.
struct SampleBatch {
  Eigen::MatrixXd vectors;
  std::uint64_t seed = 0;
  double lipschitz_L = 0.0;

  std::size_t n() const noexcept { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors.cols()); }
};

struct EstimatorResult {
  SymmetricMatrix e_hat;
  double norm_e_hat = 0.0;
  SampleBatch batch;
  /// ||E_hat - E||_2 / ||E||_2, set when the exact E was supplied.
  std::optional<double> rel_error;
};

/// Streams n gradient samples drawn with Rng(seed) to `sink(j, z_j)` without
/// storing them. Same sequence and checks as draw_batch.
void for_each_gradient(const SampledFunction& f, std::size_t n, std::uint64_t seed,
                       const std::function<void(std::size_t, const Eigen::VectorXd&)>& sink);

/// Draws n i.i.d. points from rho with Rng(seed) and evaluates the gradient at
/// each. Throws ModelViolation if a gradient is non-finite or exceeds
/// L * (1 + 1e-12), ArgumentError if n == 0.
SampleBatch draw_batch(const SampledFunction& f, std::size_t n, std::uint64_t seed);

/// E_hat = (1/n) sum_j z_j z_j^T, accumulated as a running mean so that a
/// batch of identical vectors reproduces z z^T exactly. Checks that E_hat is
/// PSD and that ||E_hat||_2 <= L^2 up to 1e-10 * max(1, L^2).
EstimatorResult estimate(const SampleBatch& batch);
EstimatorResult estimate(const SampleBatch& batch, const SymmetricMatrix& exact_E);

/// Relative spectral error ||E_hat - E||_2 / ||E||_2.
double relative_error(const SymmetricMatrix& e_hat, const SymmetricMatrix& exact_E);

/// CSV export: a '#' comment line with seed, n and m, a header row z1..zm,
/// then one z_j per row with 17 significant digits.
void write_batch_csv(std::ostream& out, const SampleBatch& batch);

}  // namespace activesub
