#pragma once

// Explicit bounds for the Monte Carlo estimator E_hat = (1/n) sum z_j z_j^T:
// the intrinsic-dimension matrix Bernstein tail, the relative-error
// certificate, the sample-size planner, the dominant-subspace angle
// certificate, the expectation/Markov alternative and the sample count of
// the earlier asymptotic active-subspace result used for comparison.
//
// Every function here is pure: identical inputs give bitwise-identical
// certificates. When a hypothesis of a bound fails the formula is still
// evaluated and the failure is listed in BoundCertificate::violated.

#include "activesub/sampling.hpp"
#include "activesub/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace activesub {

enum class BoundKind {
  relative_error,
  sample_size,
  angle,
  bernstein_tail,
  expectation_markov,
  prior_work,
};

std::string_view to_string(BoundKind kind) noexcept;
/// Parses the names produced by to_string. Returns nullopt for unknown names.
std::optional<BoundKind> bound_kind_from_string(std::string_view name) noexcept;

struct BoundCertificate {
  BoundKind kind = BoundKind::relative_error;
  double value = 0.0;
  /// Named intermediate quantities in evaluation order.
  std::vector<std::pair<std::string, double>> intermediates;
  /// Hypotheses of the bound that do not hold for these inputs.
  std::vector<std::string> violated;
  std::vector<std::string> notes;

  bool assumptions_ok() const noexcept { return violated.empty(); }
  bool has(std::string_view name) const noexcept;
  /// Throws ArgumentError if `name` is not recorded.
  double intermediate(std::string_view name) const;
};

/// {"kind", "value", "assumptions_ok", "intermediates": {...},
///  "assumptions": [violated...], "notes": [...]}
nlohmann::ordered_json to_json(const BoundCertificate& cert);
std::string certificate_csv_header(const BoundCertificate& cert);
std::string certificate_csv_row(const BoundCertificate& cert);

/// Problem parameters: gradient bound L, ||E||_2, intdim(E), sample count n,
/// failure probability delta and relative tolerance epsilon. n and epsilon
/// are optional because the planner produces one from the other.
struct ProblemParams {
  double lipschitz_L = 0.0;
  double norm_E = 0.0;
  double intdim_E = 1.0;
  std::optional<std::uint64_t> samples;
  double delta = 0.0;
  std::optional<double> epsilon;

  /// L^2 / ||E||_2 (>= 1).
  double smoothness_ratio() const noexcept { return lipschitz_L * lipschitz_L / norm_E; }
};

/// L, ||E||_2 and intdim(E) from a function's analytic E. Throws
/// ArgumentError when the function has no analytic E.
ProblemParams problem_params(const SampledFunction& f, double delta);

/// Eigenvalue gap lambda_k - lambda_{k+1} (k is 1-based).
struct GapInfo {
  std::size_t k = 1;
  double lambda_k = 0.0;
  double lambda_k1 = 0.0;
  double gap = 0.0;
};

/// Throws ArgumentError unless 1 <= k < m.
GapInfo gap_info(const EigenSystem& es, std::size_t k);

/// Tail bound 4 intdim(P) exp(-(eps^2/2) / (||P||_2 + beta eps / 3)) for
/// ||sum X_j||_2 >= eps. `value` is clamped to [0, 1]; the raw value is the
/// intermediate "raw". The sufficient-tolerance hypothesis
/// eps >= sqrt(||P||_2) + beta / 3 is checked. Throws ArgumentError for
/// non-positive norm_P or beta.
BoundCertificate bernstein_tail(double norm_P, double intdim_P, double beta, double eps_abs);

/// Relative error gamma + sqrt(gamma (gamma + 6)) guaranteed with probability
/// at least 1 - delta, where gamma = (1/(3n)) (L^2/||E||_2) ln(4 intdim(E)/delta).
/// Requires p.samples.
BoundCertificate relative_error_bound(const ProblemParams& p);

/// ceil((8 / (3 eps^2)) (L^2/||E||_2) ln(4 intdim(E)/delta)). Requires
/// p.epsilon in (0, 1), ArgumentError otherwise. p.samples is ignored.
std::uint64_t required_samples(const ProblemParams& p);
BoundCertificate sample_size_certificate(const ProblemParams& p);

/// sin angle <= 4 ||E||_2 eps / gap, valid for eps < gap / (4 ||E||_2).
/// Records the planner's sample count as "required_n". Throws DomainError
/// when gap <= 0.
BoundCertificate angle_certificate(const ProblemParams& p, const GapInfo& g);

/// Absolute tolerance (10/3)(sqrt(||P||_2 theta) + beta theta) / delta with
/// theta = ln(1 + intdim), ||P||_2 = L^2 ||E||_2 / n and beta = L^2 / n.
/// The intdim >= 2 hypothesis is flagged, not enforced. Requires p.samples.
BoundCertificate expectation_markov_bound(const ProblemParams& p);

/// max{L^2 / (lambda1 eps), nu / (lambda1^2 eps^2)} ln(2m), i.e. the earlier
/// asymptotic sample count evaluated with implied constant 1. For side by
/// side comparison only.
BoundCertificate prior_work_samples(double lambda1, double nu, double lipschitz_L, double eps,
                                    std::size_t m);

struct NuEstimate {
  double value = 0.0;
  /// First-order standard error: sd of ||W_j u||^2 / sqrt(n) with u the top
  /// eigenvector of the mean of W_j^2, W_j = z_j z_j^T - E.
  double std_error = 0.0;
  std::size_t n_ref = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of nu = ||E[(grad f grad f^T - E)^2]||_2 using the
/// analytic E. Throws ArgumentError when f has no analytic E.
NuEstimate estimate_nu(const SampledFunction& f, std::size_t n_ref, std::uint64_t seed);

}  // namespace activesub
