#pragma once

// Random instances for property tests and experiments. Documented so that a
// failing instance can be regenerated from its seed:
//   - Gaussian entries come from Rng::normal(), filled column by column.
//   - Haar orthogonal Q: Householder QR of an m x m Gaussian matrix, with the
//     columns of Q multiplied by sign(R_jj).
//   - with_spectrum: Q diag(spectrum) Q^T for a Haar Q.
//   - symmetric_perturbation: (G + G^T) / 2 for Gaussian G, rescaled to the
//     requested spectral norm.

#include "activesub/rng.hpp"
#include "activesub/spectral.hpp"

namespace activesub {

Eigen::MatrixXd gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);
Eigen::MatrixXd haar_orthogonal(std::size_t m, Rng& rng);
SymmetricMatrix random_symmetric(std::size_t m, Rng& rng);
SymmetricMatrix with_spectrum(const Eigen::VectorXd& spectrum, Rng& rng);
SymmetricMatrix symmetric_perturbation(std::size_t m, double norm, Rng& rng);
SubspaceBasis random_subspace(std::size_t m, std::size_t k, Rng& rng);

}  // namespace activesub
