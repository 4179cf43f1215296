#pragma once

// Deterministic perturbation analysis of a symmetric pair (E, E_hat): block
// norms of E_hat - E in E's eigenbasis, the eigenvalue-gap angle guarantee
// and the Weyl eigenvalue bound, evaluated on concrete matrices.

#include "activesub/bounds.hpp"
#include "activesub/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace activesub {

/// Gaps below this multiple of ||E||_2 are treated as zero.
inline constexpr double kGapTolerance = 1e-12;

/// Spectral norms of F = V^T (E_hat - E) V split conformally with the
/// leading k eigenvectors V1 of E: F11 = V1^T D V1, F12 = V1^T D V2,
/// F22 = V2^T D V2.
struct PerturbationBlocks {
  double norm_F = 0.0;
  double norm_F11 = 0.0;
  double norm_F12 = 0.0;
  double norm_F22 = 0.0;
};

/// Throws DomainError unless E has a gap at k larger than kGapTolerance * ||E||_2,
/// ArgumentError on dimension mismatch or k outside [1, m).
PerturbationBlocks perturbation_blocks(const SymmetricMatrix& e, const SymmetricMatrix& e_hat,
                                       std::size_t k);

struct EigenvalueDeviation {
  double max_deviation = 0.0;  ///< max_j |lambda_j - lambda_hat_j|
  double tau = 0.0;            ///< ||E_hat - E||_2
  bool within_bound = false;   ///< max_deviation <= tau + 1e-10 ||E||_2
};

/// Weyl / interlacing check on sorted eigenvalues.
EigenvalueDeviation eigenvalue_deviation(const SymmetricMatrix& e, const SymmetricMatrix& e_hat);

struct InequalityCheck {
  std::string name;
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PerturbationReport {
  std::size_t dim = 0;
  std::size_t k = 1;
  double tau = 0.0;
  double norm_E = 0.0;
  double norm_E_hat = 0.0;
  GapInfo gap;
  PerturbationBlocks blocks;
  /// gap - ||F11||_2 - ||F22||_2
  double eta = 0.0;
  /// tau < gap / 4
  bool hypothesis_ok = false;
  /// eta > 0 and ||F12||_2 / gap < 1/2
  bool block_conditions_ok = false;
  double perturbed_gap = 0.0;
  /// perturbed_gap > kGapTolerance * ||E_hat||_2; otherwise the dominant
  /// subspace of E_hat is reported ill-defined and sin_angle is empty.
  bool e_hat_subspace_defined = false;
  std::optional<double> sin_angle;
  /// 4 tau / gap
  double gap_bound = 0.0;
  /// 2 ||F12||_2 / eta, present when eta > 0
  std::optional<double> block_bound;
  double max_eigenvalue_deviation = 0.0;
  /// Floating-point allowance added to the right-hand side of angle checks.
  double angle_allowance = 0.0;
  std::vector<InequalityCheck> checks;

  bool all_checks_passed() const noexcept;
};

/// Evaluates everything above for the pair. When tau < gap/4 the report
/// asserts: E_hat has a positive gap at k, its leading subspace is defined,
/// eta >= gap/2 and sin_angle <= 4 tau / gap. Whenever the block conditions
/// hold it also asserts sin_angle <= 2 ||F12||_2 / eta. The Weyl bound is
/// asserted unconditionally. Failed assertions are recorded in `checks`,
/// never thrown.
PerturbationReport subspace_perturbation_report(const SymmetricMatrix& e,
                                                const SymmetricMatrix& e_hat, std::size_t k);

nlohmann::ordered_json to_json(const PerturbationReport& report);

}  // namespace activesub
