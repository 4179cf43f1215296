#include "activesub/sampling.hpp"

#include "activesub/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace activesub {

SampledFunction::SampledFunction(std::size_t dim, GradientFn gradient, PointSampler sampler,
                                 double lipschitz_L, std::optional<SymmetricMatrix> analytic_E,
                                 nlohmann::ordered_json description)
    : dim_(dim),
      gradient_(std::move(gradient)),
      sampler_(std::move(sampler)),
      lipschitz_L_(lipschitz_L),
      analytic_E_(std::move(analytic_E)),
      description_(std::move(description)) {
  if (dim_ == 0) throw ArgumentError("sampled function needs dimension >= 1");
  if (!(lipschitz_L_ > 0.0) || !std::isfinite(lipschitz_L_))
    throw ArgumentError("Lipschitz bound L must be positive and finite");
  if (analytic_E_) {
    if (analytic_E_->dim() != dim_) throw ArgumentError("analytic E has the wrong dimension");
    const EigenSystem es = eig_sym(*analytic_E_);
    const double norm = spectral_norm(es);
    if (es.values(es.values.size() - 1) < -kPsdTolerance * norm)
      throw ArgumentError("analytic E is not positive semi-definite");
    const double l2 = lipschitz_L_ * lipschitz_L_;
    if (norm > l2 * (1.0 + 2.0 * kGradientBoundTolerance))
      throw ArgumentError("analytic E violates ||E||_2 <= L^2");
  }
}

void for_each_gradient(const SampledFunction& f, std::size_t n, std::uint64_t seed,
                       const std::function<void(std::size_t, const Eigen::VectorXd&)>& sink) {
  if (n == 0) throw ArgumentError("need n >= 1 samples");
  const auto m = static_cast<Eigen::Index>(f.dim());
  const double limit = f.lipschitz_L() * (1.0 + kGradientBoundTolerance);

  Rng rng(seed);
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::VectorXd x = f.sample_point(rng);
    const Eigen::VectorXd z = f.gradient(x);
    if (z.size() != m) throw ModelViolation("gradient returned a vector of the wrong length");
    if (!z.allFinite()) throw ModelViolation("gradient is not finite at sample " + std::to_string(j));
    const double norm = z.norm();
    if (norm > limit) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "gradient norm " << norm << " at sample " << j
          << " exceeds the declared bound L = " << f.lipschitz_L();
      throw ModelViolation(msg.str());
    }
    sink(j, z);
  }
}

SampleBatch draw_batch(const SampledFunction& f, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ArgumentError("draw_batch needs n >= 1");
  SampleBatch batch;
  batch.seed = seed;
  batch.lipschitz_L = f.lipschitz_L();
  batch.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f.dim()));
  for_each_gradient(f, n, seed, [&](std::size_t j, const Eigen::VectorXd& z) {
    batch.vectors.row(static_cast<Eigen::Index>(j)) = z.transpose();
  });
  return batch;
}

EstimatorResult estimate(const SampleBatch& batch) {
  const Eigen::Index n = batch.vectors.rows();
  const Eigen::Index m = batch.vectors.cols();
  if (n < 1 || m < 1) throw ArgumentError("estimate needs a non-empty batch");
  if (!batch.vectors.allFinite()) throw ArgumentError("batch contains non-finite vectors");

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double weight = 1.0 / static_cast<double>(j + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      const double za = batch.vectors(j, a);
      for (Eigen::Index b = a; b < m; ++b) {
        const double outer = za * batch.vectors(j, b);
        mean(a, b) += (outer - mean(a, b)) * weight;
      }
    }
  }
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < a; ++b) mean(a, b) = mean(b, a);

  EstimatorResult result{SymmetricMatrix(mean, true), 0.0, batch, std::nullopt};
  result.norm_e_hat = spectral_norm(result.e_hat);
  if (batch.lipschitz_L > 0.0) {
    const double l2 = batch.lipschitz_L * batch.lipschitz_L;
    if (result.norm_e_hat > l2 + 1e-10 * std::max(1.0, l2))
      throw ModelViolation("||E_hat||_2 exceeds L^2");
  }
  return result;
}

double relative_error(const SymmetricMatrix& e_hat, const SymmetricMatrix& exact_E) {
  const double norm_e = spectral_norm(exact_E);
  if (norm_e == 0.0) throw DomainError("relative error undefined for E = 0");
  return spectral_norm(e_hat - exact_E) / norm_e;
}

EstimatorResult estimate(const SampleBatch& batch, const SymmetricMatrix& exact_E) {
  EstimatorResult result = estimate(batch);
  if (exact_E.dim() != batch.dim()) throw ArgumentError("exact E has the wrong dimension");
  result.rel_error = relative_error(result.e_hat, exact_E);
  return result;
}

void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
  out << "# seed=" << batch.seed << " n=" << batch.n() << " m=" << batch.dim()
      << " L=" << std::setprecision(17) << batch.lipschitz_L << '\n';
  for (std::size_t a = 0; a < batch.dim(); ++a) out << (a ? "," : "") << 'z' << (a + 1);
  out << '\n';
  for (Eigen::Index j = 0; j < batch.vectors.rows(); ++j) {
    for (Eigen::Index a = 0; a < batch.vectors.cols(); ++a)
      out << (a ? "," : "") << batch.vectors(j, a);
    out << '\n';
  }
}

}  // namespace activesub
