#include "activesub/random_matrices.hpp"

#include "activesub/errors.hpp"

namespace activesub {

Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  return g;
}

Eigen::MatrixXd haar_orthogonal(std::size_t m, Rng& rng) {
  const Eigen::MatrixXd g = gaussian_matrix(m, m, rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

SymmetricMatrix random_symmetric(std::size_t m, Rng& rng) {
  return SymmetricMatrix(gaussian_matrix(m, m, rng));
}

SymmetricMatrix with_spectrum(const Eigen::VectorXd& spectrum, Rng& rng) {
  const Eigen::MatrixXd q = haar_orthogonal(static_cast<std::size_t>(spectrum.size()), rng);
  return SymmetricMatrix(q * spectrum.asDiagonal() * q.transpose(),
                         spectrum.size() > 0 && spectrum.minCoeff() >= 0.0);
}

SymmetricMatrix symmetric_perturbation(std::size_t m, double norm, Rng& rng) {
  if (!(norm >= 0.0)) throw ArgumentError("perturbation norm must be non-negative");
  const SymmetricMatrix s = random_symmetric(m, rng);
  const double current = spectral_norm(s);
  if (current == 0.0) return SymmetricMatrix::zero(m);
  return (norm / current) * s;
}

SubspaceBasis random_subspace(std::size_t m, std::size_t k, Rng& rng) {
  return SubspaceBasis(haar_orthogonal(m, rng).leftCols(static_cast<Eigen::Index>(k)));
}

}  // namespace activesub
