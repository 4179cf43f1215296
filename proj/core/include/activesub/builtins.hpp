#pragma once

// Test functions with exactly known sensitivity matrices. All of them draw
// x uniformly from the hypercube [-1, 1]^m, coordinate by coordinate.

#include "activesub/sampling.hpp"

#include <vector>

namespace activesub {

/// Largest dimension accepted by builtin_quadratic (2^(m-1) vertices are scanned).
inline constexpr std::size_t kMaxQuadraticDim = 20;

/// f(x) = c^T x. E = c c^T, L = ||c||_2. Throws ArgumentError for c = 0.
SampledFunction builtin_linear(const Eigen::VectorXd& c);

/// f(x) = x^T A x / 2, grad f = A x. E = A^2 / 3 and L is the maximum of
/// ||A v||_2 over the hypercube vertices v. Throws ArgumentError for A = 0
/// and UnsupportedSize for m > 20.
SampledFunction builtin_quadratic(const SymmetricMatrix& a);

/// f(x) = sum_i a_i sin(d_i^T x) for orthonormal d_i, L = sum_i |a_i|.
/// E = D M D^T with M_ij = a_i a_j E[cos(d_i^T x) cos(d_j^T x)]; each
/// expectation factorizes over coordinates into 1-D integrals
/// (1/2) int_{-1}^{1} cos(v t) dt, evaluated by composite Gauss-Legendre.
SampledFunction builtin_ridge_sum(const std::vector<Eigen::VectorXd>& directions,
                                  const std::vector<double>& amplitudes);

/// (1/2) int_{-1}^{1} cos(v t) dt by composite 20-point Gauss-Legendre
/// quadrature with panel width at most 1 / (2 |v|).
double mean_cos_uniform(double v);

/// Embeds f into R^m_new: the gradient is f's gradient followed by zeros, E is
/// zero-padded and L is unchanged. The leading coordinates consume the
/// generator exactly as f does; the inactive trailing coordinates are drawn
/// from an auxiliary generator keyed on the leading ones, so the gradient
/// stream of the padded function matches f's bit for bit.
SampledFunction pad_inactive(const SampledFunction& f, std::size_t m_new);

}  // namespace activesub
