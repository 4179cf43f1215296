#pragma once

// Dense symmetric linear algebra: eigendecomposition by cyclic Jacobi,
// spectral norms, intrinsic dimension, principal angles and projectors.

#include <Eigen/Dense>

#include <cstddef>

namespace activesub {

/// Relative tolerance used for the PSD check: lambda_min >= -kPsdTolerance * ||A||_2.
inline constexpr double kPsdTolerance = 1e-10;

/// Tolerance on max |B^T B - I| for orthonormal bases and eigenvector matrices.
inline constexpr double kOrthonormalityTolerance = 1e-10;

/// Dense real symmetric matrix. Construction symmetrizes the input as
/// (A + A^T) / 2, so entries(i, j) == entries(j, i) holds exactly afterwards.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Symmetrizes `entries`. When `psd_hint` is set the smallest eigenvalue is
  /// checked against -kPsdTolerance * ||A||_2 and DomainError thrown on failure.
  explicit SymmetricMatrix(const Eigen::MatrixXd& entries, bool psd_hint = false);

  static SymmetricMatrix zero(std::size_t dim);
  static SymmetricMatrix identity(std::size_t dim);
  static SymmetricMatrix diagonal(const Eigen::VectorXd& diag);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  bool psd_hint() const noexcept { return psd_hint_; }
  double trace() const { return entries_.trace(); }

  /// Frobenius norm, accumulated row-major in index order.
  double frobenius_norm() const;

 private:
  Eigen::MatrixXd entries_;
  bool psd_hint_ = false;
};

SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b);
SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b);
SymmetricMatrix operator*(double c, const SymmetricMatrix& a);

/// Eigenvalues sorted descending with orthonormal eigenvectors; column j of
/// `vectors` belongs to `values(j)`.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.size()); }
};

/// Options for the cyclic Jacobi eigensolver.
struct JacobiOptions {
  int max_sweeps = 64;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Pivots are visited row by row, (0,1), (0,2), ..., (m-2,m-1), so the result
/// is deterministic for a fixed input. An off-diagonal entry is annihilated
/// unless it is already negligible: |a_pq| <= eps * sqrt(|a_pp a_qq|) or
/// |a_pq| <= eps * 1e-3 * ||A||_F. Iteration stops after a sweep that performs
/// no rotation. Eigenvalues are sorted descending with a stable sort, so
/// ties keep their sweep order.
///
/// Throws ConvergenceError (carrying ||AV - V diag(values)||_F) when
/// `max_sweeps` is exhausted, and ArgumentError on non-finite entries.
EigenSystem eig_sym(const SymmetricMatrix& a, const JacobiOptions& options = {});

/// max_i |lambda_i(A)|.
double spectral_norm(const SymmetricMatrix& a);
double spectral_norm(const EigenSystem& es);

/// Spectral norm (largest singular value) of a rectangular matrix, computed
/// through the symmetric embedding [[0, B], [B^T, 0]].
double spectral_norm_rect(const Eigen::MatrixXd& b);

/// trace(A) / ||A||_2 for a non-zero PSD matrix, evaluated from the
/// eigenvalues as 1 + sum_{i>1} max(lambda_i, 0) / lambda_1 so that the
/// result lies in [1, m] in floating point too.
double intrinsic_dimension(const SymmetricMatrix& a);
double intrinsic_dimension(const EigenSystem& es);

/// Number of eigenvalues strictly above rel_tol * ||A||_2.
std::size_t numerical_rank(const EigenSystem& es, double rel_tol = 1e-12);

/// V diag(f(lambda)) V^T with negative eigenvalues clamped to zero first.
SymmetricMatrix psd_sqrt(const SymmetricMatrix& a);

/// Orthonormal basis of a k-dimensional subspace of R^m with 1 <= k < m.
class SubspaceBasis {
 public:
  /// Validates ||B^T B - I||_max <= kOrthonormalityTolerance and 1 <= k < m.
  explicit SubspaceBasis(Eigen::MatrixXd basis);

  /// Span of the leading k eigenvectors.
  static SubspaceBasis leading(const EigenSystem& es, std::size_t k);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t k() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

 private:
  Eigen::MatrixXd basis_;
};

/// Orthogonal projector B B^T.
SymmetricMatrix projector(const SubspaceBasis& s);

/// Sine of the largest principal angle, ||B1 B1^T - B2 B2^T||_2.
///
/// The value is cross-checked against principal_angle_sin_cross_gram; a
/// disagreement beyond what cancellation in sqrt(1 - sigma^2) explains raises
/// a ConvergenceError.
double principal_angle_sin(const SubspaceBasis& s1, const SubspaceBasis& s2);

/// sqrt(1 - sigma_min(B1^T B2)^2). Loses accuracy for nearly aligned
/// subspaces (absolute error up to ~sqrt(eps)).
double principal_angle_sin_cross_gram(const SubspaceBasis& s1, const SubspaceBasis& s2);

}  // namespace activesub
