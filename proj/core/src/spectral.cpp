#include "activesub/spectral.hpp"

#include "activesub/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace activesub {

namespace {

using Index = Eigen::Index;

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool all_finite(const Eigen::MatrixXd& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j))) return false;
  return true;
}

double max_abs_orthonormality_defect(const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd gram = b.transpose() * b;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& entries, bool psd_hint)
    : psd_hint_(psd_hint) {
  if (entries.rows() != entries.cols())
    throw ArgumentError("symmetric matrix must be square, got " + std::to_string(entries.rows()) +
                        "x" + std::to_string(entries.cols()));
  if (entries.rows() == 0) throw ArgumentError("symmetric matrix must have dimension >= 1");
  entries_ = 0.5 * (entries + entries.transpose());
  if (psd_hint_) {
    const EigenSystem es = eig_sym(*this);
    const double norm = spectral_norm(es);
    const double lambda_min = es.values(es.values.size() - 1);
    if (lambda_min < -kPsdTolerance * norm)
      throw DomainError("matrix flagged PSD has eigenvalue " + std::to_string(lambda_min) +
                        " below -1e-10 * ||A||_2");
  }
}

SymmetricMatrix SymmetricMatrix::zero(std::size_t dim) {
  const auto m = static_cast<Index>(dim);
  return SymmetricMatrix(Eigen::MatrixXd::Zero(m, m), true);
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
  const auto m = static_cast<Index>(dim);
  return SymmetricMatrix(Eigen::MatrixXd::Identity(m, m), true);
}

SymmetricMatrix SymmetricMatrix::diagonal(const Eigen::VectorXd& diag) {
  return SymmetricMatrix(Eigen::MatrixXd(diag.asDiagonal()), diag.size() > 0 && diag.minCoeff() >= 0.0);
}

double SymmetricMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (Index i = 0; i < entries_.rows(); ++i)
    for (Index j = 0; j < entries_.cols(); ++j) sum += entries_(i, j) * entries_(i, j);
  return std::sqrt(sum);
}

SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in matrix difference");
  return SymmetricMatrix(a.entries() - b.entries());
}

SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in matrix sum");
  return SymmetricMatrix(a.entries() + b.entries());
}

SymmetricMatrix operator*(double c, const SymmetricMatrix& a) {
  return SymmetricMatrix(c * a.entries());
}

EigenSystem eig_sym(const SymmetricMatrix& a, const JacobiOptions& options) {
  const Index m = a.entries().rows();
  if (!all_finite(a.entries())) throw ArgumentError("eig_sym: matrix has non-finite entries");

  Eigen::MatrixXd w = a.entries();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(m, m);
  const double abs_floor = kEps * 1e-3 * a.frobenius_norm();

  bool converged = m <= 1;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    int rotations = 0;
    for (Index p = 0; p + 1 < m; ++p) {
      for (Index q = p + 1; q < m; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double app = w(p, p);
        const double aqq = w(q, q);
        if (std::abs(apq) <= kEps * std::sqrt(std::abs(app)) * std::sqrt(std::abs(aqq)) ||
            std::abs(apq) <= abs_floor) {
          w(p, q) = 0.0;
          w(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        w(p, p) = app - t * apq;
        w(q, q) = aqq + t * apq;
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        for (Index r = 0; r < m; ++r) {
          if (r == p || r == q) continue;
          const double arp = w(r, p);
          const double arq = w(r, q);
          const double new_rp = c * arp - s * arq;
          const double new_rq = s * arp + c * arq;
          w(r, p) = new_rp;
          w(p, r) = new_rp;
          w(r, q) = new_rq;
          w(q, r) = new_rq;
        }
        for (Index r = 0; r < m; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
        ++rotations;
      }
    }
    converged = rotations == 0;
  }

  if (!converged) {
    const Eigen::VectorXd d = w.diagonal();
    const double residual = (a.entries() * v - v * d.asDiagonal()).norm();
    throw ConvergenceError("eig_sym: Jacobi iteration did not converge in " +
                               std::to_string(options.max_sweeps) + " sweeps (residual " +
                               std::to_string(residual) + ")",
                           residual);
  }

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return w(i, i) > w(j, j); });

  EigenSystem es;
  es.values.resize(m);
  es.vectors.resize(m, m);
  for (Index j = 0; j < m; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    es.values(j) = w(src, src);
    es.vectors.col(j) = v.col(src);
  }
  return es;
}

double spectral_norm(const EigenSystem& es) {
  if (es.values.size() == 0) return 0.0;
  return std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1)));
}

double spectral_norm(const SymmetricMatrix& a) { return spectral_norm(eig_sym(a)); }

double spectral_norm_rect(const Eigen::MatrixXd& b) {
  const Index r = b.rows();
  const Index c = b.cols();
  if (r == 0 || c == 0) return 0.0;
  Eigen::MatrixXd embed = Eigen::MatrixXd::Zero(r + c, r + c);
  embed.topRightCorner(r, c) = b;
  embed.bottomLeftCorner(c, r) = b.transpose();
  return spectral_norm(SymmetricMatrix(embed));
}

double intrinsic_dimension(const EigenSystem& es) {
  const Index m = es.values.size();
  if (m == 0) throw DomainError("intdim undefined for empty matrix");
  const double norm = spectral_norm(es);
  if (norm == 0.0) throw DomainError("intdim undefined for zero matrix");
  if (es.values(m - 1) < -kPsdTolerance * norm)
    throw DomainError("intdim requires a positive semi-definite matrix");
  const double lambda1 = es.values(0);
  double sum = 1.0;
  for (Index i = 1; i < m; ++i) sum += std::max(es.values(i), 0.0) / lambda1;
  return sum;
}

double intrinsic_dimension(const SymmetricMatrix& a) { return intrinsic_dimension(eig_sym(a)); }

std::size_t numerical_rank(const EigenSystem& es, double rel_tol) {
  const double threshold = rel_tol * spectral_norm(es);
  std::size_t rank = 0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > threshold) ++rank;
  return rank;
}

SymmetricMatrix psd_sqrt(const SymmetricMatrix& a) {
  const EigenSystem es = eig_sym(a);
  const Eigen::VectorXd roots = es.values.cwiseMax(0.0).cwiseSqrt();
  return SymmetricMatrix(es.vectors * roots.asDiagonal() * es.vectors.transpose(), true);
}

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  const Index m = basis_.rows();
  const Index k = basis_.cols();
  if (k < 1 || k >= m)
    throw ArgumentError("subspace dimension k=" + std::to_string(k) + " must satisfy 1 <= k < m=" +
                        std::to_string(m));
  const double defect = max_abs_orthonormality_defect(basis_);
  if (!(defect <= kOrthonormalityTolerance))
    throw ArgumentError("subspace basis is not orthonormal (max |B^T B - I| = " +
                        std::to_string(defect) + ")");
}

SubspaceBasis SubspaceBasis::leading(const EigenSystem& es, std::size_t k) {
  if (k < 1 || k >= es.dim())
    throw ArgumentError("leading subspace needs 1 <= k < m");
  return SubspaceBasis(es.vectors.leftCols(static_cast<Index>(k)));
}

SymmetricMatrix projector(const SubspaceBasis& s) {
  return SymmetricMatrix(s.basis() * s.basis().transpose(), true);
}

double principal_angle_sin_cross_gram(const SubspaceBasis& s1, const SubspaceBasis& s2) {
  if (s1.dim() != s2.dim() || s1.k() != s2.k())
    throw ArgumentError("principal angles need subspaces of equal ambient and subspace dimension");
  const Eigen::MatrixXd cross = s1.basis().transpose() * s2.basis();
  const EigenSystem es = eig_sym(SymmetricMatrix(cross.transpose() * cross));
  const double sigma_min_sq = std::clamp(es.values(es.values.size() - 1), 0.0, 1.0);
  return std::sqrt(1.0 - sigma_min_sq);
}

double principal_angle_sin(const SubspaceBasis& s1, const SubspaceBasis& s2) {
  if (s1.dim() != s2.dim() || s1.k() != s2.k())
    throw ArgumentError("principal angles need subspaces of equal ambient and subspace dimension");
  const SymmetricMatrix diff(s1.basis() * s1.basis().transpose() -
                             s2.basis() * s2.basis().transpose());
  const double by_projectors = std::min(spectral_norm(diff), 1.0);
  const double by_gram = principal_angle_sin_cross_gram(s1, s2);

  // sqrt(1 - sigma^2) amplifies an O(eps) error in sigma^2 by 1 / (2 sin).
  const double gram_error = 64.0 * kEps * static_cast<double>(s1.k());
  const double tol =
      1e-10 + gram_error / (2.0 * std::max(by_projectors, std::sqrt(gram_error)));
  if (std::abs(by_projectors - by_gram) > tol)
    throw ConvergenceError("principal_angle_sin: projector and cross-Gram routes disagree",
                           std::abs(by_projectors - by_gram));
  return by_projectors;
}

}  // namespace activesub
