#include "activesub/perturbation.hpp"

#include "activesub/errors.hpp"

#include <cmath>
#include <limits>

namespace activesub {

namespace {

using Index = Eigen::Index;

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_pair(const SymmetricMatrix& e, const SymmetricMatrix& e_hat) {
  if (e.dim() != e_hat.dim()) throw ArgumentError("E and E_hat differ in dimension");
}

GapInfo require_gap(const EigenSystem& es, std::size_t k) {
  const GapInfo g = gap_info(es, k);
  if (!(g.gap > kGapTolerance * spectral_norm(es)))
    throw DomainError("no eigenvalue gap at k=" + std::to_string(k) +
                      ": dominant subspace undefined");
  return g;
}

PerturbationBlocks blocks_in_basis(const Eigen::MatrixXd& v, const SymmetricMatrix& diff,
                                   std::size_t k) {
  const Eigen::MatrixXd f = v.transpose() * diff.entries() * v;
  const auto kk = static_cast<Index>(k);
  const Index m = f.rows();
  PerturbationBlocks b;
  b.norm_F = spectral_norm(SymmetricMatrix(f));
  b.norm_F11 = spectral_norm(SymmetricMatrix(f.topLeftCorner(kk, kk)));
  b.norm_F22 = spectral_norm(SymmetricMatrix(f.bottomRightCorner(m - kk, m - kk)));
  b.norm_F12 = spectral_norm_rect(f.topRightCorner(kk, m - kk));
  return b;
}

}  // namespace

PerturbationBlocks perturbation_blocks(const SymmetricMatrix& e, const SymmetricMatrix& e_hat,
                                       std::size_t k) {
  check_pair(e, e_hat);
  const EigenSystem es = eig_sym(e);
  require_gap(es, k);
  return blocks_in_basis(es.vectors, e_hat - e, k);
}

EigenvalueDeviation eigenvalue_deviation(const SymmetricMatrix& e, const SymmetricMatrix& e_hat) {
  check_pair(e, e_hat);
  const EigenSystem es = eig_sym(e);
  const EigenSystem es_hat = eig_sym(e_hat);
  EigenvalueDeviation out;
  out.max_deviation = (es.values - es_hat.values).cwiseAbs().maxCoeff();
  out.tau = spectral_norm(e_hat - e);
  out.within_bound = out.max_deviation <= out.tau + 1e-10 * spectral_norm(es);
  return out;
}

bool PerturbationReport::all_checks_passed() const noexcept {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

PerturbationReport subspace_perturbation_report(const SymmetricMatrix& e,
                                                const SymmetricMatrix& e_hat, std::size_t k) {
  check_pair(e, e_hat);
  const EigenSystem es = eig_sym(e);
  const EigenSystem es_hat = eig_sym(e_hat);

  PerturbationReport r;
  r.dim = e.dim();
  r.k = k;
  r.gap = require_gap(es, k);
  r.norm_E = spectral_norm(es);
  r.norm_E_hat = spectral_norm(es_hat);
  const SymmetricMatrix diff = e_hat - e;
  r.tau = spectral_norm(diff);
  r.blocks = blocks_in_basis(es.vectors, diff, k);
  r.eta = r.gap.gap - r.blocks.norm_F11 - r.blocks.norm_F22;
  r.hypothesis_ok = r.tau < r.gap.gap / 4.0;
  r.block_conditions_ok = r.eta > 0.0 && r.blocks.norm_F12 / r.gap.gap < 0.5;
  r.gap_bound = 4.0 * r.tau / r.gap.gap;
  if (r.eta > 0.0) r.block_bound = 2.0 * r.blocks.norm_F12 / r.eta;

  const GapInfo hat_gap = gap_info(es_hat, k);
  r.perturbed_gap = hat_gap.gap;
  r.e_hat_subspace_defined = r.perturbed_gap > kGapTolerance * r.norm_E_hat;
  if (r.e_hat_subspace_defined)
    r.sin_angle = principal_angle_sin(SubspaceBasis::leading(es, k),
                                      SubspaceBasis::leading(es_hat, k));

  r.max_eigenvalue_deviation = (es.values - es_hat.values).cwiseAbs().maxCoeff();
  r.angle_allowance = 64.0 * kEps * (r.norm_E + 2.0 * r.norm_E_hat) / r.gap.gap;
  const double norm_allowance = 64.0 * kEps * (r.norm_E + r.norm_E_hat);

  auto check = [&](std::string name, double lhs, double rhs, bool passed) {
    r.checks.push_back({std::move(name), passed, lhs, rhs});
  };
  const double weyl_rhs = r.tau + 1e-10 * r.norm_E;
  check("eigenvalue_deviation_le_tau", r.max_eigenvalue_deviation, weyl_rhs,
        r.max_eigenvalue_deviation <= weyl_rhs);

  if (r.hypothesis_ok) {
    check("perturbed_gap_positive", r.perturbed_gap, 0.0, r.perturbed_gap > 0.0);
    check("e_hat_subspace_defined", r.perturbed_gap, kGapTolerance * r.norm_E_hat,
          r.e_hat_subspace_defined);
    const double half_gap = r.gap.gap / 2.0 - norm_allowance;
    check("eta_ge_half_gap", r.eta, half_gap, r.eta >= half_gap);
    if (r.sin_angle) {
      const double rhs = r.gap_bound + r.angle_allowance;
      check("sin_angle_le_gap_bound", *r.sin_angle, rhs, *r.sin_angle <= rhs);
    }
  }
  if (r.block_conditions_ok && r.sin_angle && r.block_bound) {
    const double rhs = *r.block_bound + r.angle_allowance;
    check("sin_angle_le_block_bound", *r.sin_angle, rhs, *r.sin_angle <= rhs);
  }
  return r;
}

nlohmann::ordered_json to_json(const PerturbationReport& r) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  auto optional_number = [](const std::optional<double>& x) {
    return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
  };
  return nlohmann::ordered_json{
      {"dim", r.dim},
      {"k", r.k},
      {"tau", r.tau},
      {"norm_E", r.norm_E},
      {"norm_E_hat", r.norm_E_hat},
      {"lambda_k", r.gap.lambda_k},
      {"lambda_k1", r.gap.lambda_k1},
      {"gap", r.gap.gap},
      {"norm_F", r.blocks.norm_F},
      {"norm_F11", r.blocks.norm_F11},
      {"norm_F12", r.blocks.norm_F12},
      {"norm_F22", r.blocks.norm_F22},
      {"eta", r.eta},
      {"hypothesis_ok", r.hypothesis_ok},
      {"block_conditions_ok", r.block_conditions_ok},
      {"perturbed_gap", r.perturbed_gap},
      {"e_hat_subspace", r.e_hat_subspace_defined ? "defined" : "ill-defined"},
      {"sin_angle", optional_number(r.sin_angle)},
      {"gap_bound", r.gap_bound},
      {"block_bound", optional_number(r.block_bound)},
      {"max_eigenvalue_deviation", r.max_eigenvalue_deviation},
      {"angle_allowance", r.angle_allowance},
      {"checks", std::move(checks)},
      {"all_checks_passed", r.all_checks_passed()},
  };
}

}  // namespace activesub
