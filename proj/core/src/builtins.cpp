#include "activesub/builtins.hpp"

#include "activesub/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <bit>
#include <cmath>
#include <string>

namespace activesub {

namespace {

using Index = Eigen::Index;

PointSampler hypercube_sampler(std::size_t dim) {
  return [dim](Rng& rng) {
    Eigen::VectorXd x(static_cast<Index>(dim));
    for (Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(-1.0, 1.0);
    return x;
  };
}

nlohmann::ordered_json to_json_vector(const Eigen::VectorXd& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::ordered_json to_json_matrix(const Eigen::MatrixXd& a) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (Index i = 0; i < a.rows(); ++i) out.push_back(to_json_vector(a.row(i).transpose()));
  return out;
}

}  // namespace

SampledFunction builtin_linear(const Eigen::VectorXd& c) {
  if (c.size() == 0 || !c.allFinite()) throw ArgumentError("linear builtin: c must be finite and non-empty");
  const double norm = c.norm();
  if (norm == 0.0) throw ArgumentError("linear builtin: c must be non-zero");

  const Index m = c.size();
  Eigen::MatrixXd e(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) e(i, j) = c(i) * c(j);

  nlohmann::ordered_json desc{{"kind", "linear"}, {"c", to_json_vector(c)}};
  return SampledFunction(
      static_cast<std::size_t>(m), [c](const Eigen::VectorXd&) { return Eigen::VectorXd(c); },
      hypercube_sampler(static_cast<std::size_t>(m)), norm, SymmetricMatrix(e, true),
      std::move(desc));
}

SampledFunction builtin_quadratic(const SymmetricMatrix& a) {
  const std::size_t dim = a.dim();
  if (dim > kMaxQuadraticDim)
    throw UnsupportedSize("quadratic builtin supports m <= 20 (vertex enumeration), got m = " +
                          std::to_string(dim));
  const Eigen::MatrixXd& entries = a.entries();
  if (!entries.allFinite()) throw ArgumentError("quadratic builtin: A must be finite");
  if (a.frobenius_norm() == 0.0) throw ArgumentError("quadratic builtin: A must be non-zero");

  const auto m = static_cast<Index>(dim);

  // E = A^2 / 3 with index-ordered sums, so zero padding leaves it bitwise unchanged.
  Eigen::MatrixXd e(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      double sum = 0.0;
      for (Index k = 0; k < m; ++k) sum += entries(i, k) * entries(k, j);
      e(i, j) = sum / 3.0;
    }
  }

  // max ||A v||_2 over vertices; v and -v give the same norm, so fix v_0 = +1.
  double max_sq = 0.0;
  const std::uint64_t vertices = std::uint64_t{1} << (dim - 1);
  for (std::uint64_t mask = 0; mask < vertices; ++mask) {
    double sq = 0.0;
    for (Index i = 0; i < m; ++i) {
      double row = 0.0;
      for (Index j = 0; j < m; ++j) {
        const bool negative = j > 0 && ((mask >> (j - 1)) & 1U);
        row += negative ? -entries(i, j) : entries(i, j);
      }
      sq += row * row;
    }
    if (sq > max_sq) max_sq = sq;
  }

  nlohmann::ordered_json desc{{"kind", "quadratic"}, {"A", to_json_matrix(entries)}};
  return SampledFunction(
      dim, [entries](const Eigen::VectorXd& x) { return Eigen::VectorXd(entries * x); },
      hypercube_sampler(dim), std::sqrt(max_sq), SymmetricMatrix(e, true), std::move(desc));
}

double mean_cos_uniform(double v) {
  // Even integrand: (1/2) int_{-1}^{1} cos(v t) dt = int_0^1 cos(v t) dt.
  const double w = std::abs(v);
  const int panels = 1 + static_cast<int>(std::ceil(2.0 * w));
  const double h = 1.0 / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += boost::math::quadrature::gauss<double, 20>::integrate(
        [w](double t) { return std::cos(w * t); }, p * h, (p + 1) * h);
  }
  return sum;
}

SampledFunction builtin_ridge_sum(const std::vector<Eigen::VectorXd>& directions,
                                  const std::vector<double>& amplitudes) {
  if (directions.empty()) throw ArgumentError("ridge_sum: at least one direction is required");
  if (directions.size() != amplitudes.size())
    throw ArgumentError("ridge_sum: directions and amplitudes differ in length");
  const Index m = directions.front().size();
  const auto r = static_cast<Index>(directions.size());
  if (m == 0) throw ArgumentError("ridge_sum: directions must be non-empty");

  Eigen::MatrixXd d(m, r);
  for (Index i = 0; i < r; ++i) {
    const Eigen::VectorXd& di = directions[static_cast<std::size_t>(i)];
    if (di.size() != m) throw ArgumentError("ridge_sum: directions differ in length");
    if (!di.allFinite()) throw ArgumentError("ridge_sum: directions must be finite");
    d.col(i) = di;
  }
  if (r > m) throw ArgumentError("ridge_sum: more directions than dimensions");
  const Eigen::MatrixXd gram = d.transpose() * d;
  const double defect = (gram - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
  if (!(defect <= kOrthonormalityTolerance))
    throw ArgumentError("ridge_sum: directions must be orthonormal");

  Eigen::VectorXd amp(r);
  double lipschitz = 0.0;
  for (Index i = 0; i < r; ++i) {
    amp(i) = amplitudes[static_cast<std::size_t>(i)];
    if (!std::isfinite(amp(i))) throw ArgumentError("ridge_sum: amplitudes must be finite");
    lipschitz += std::abs(amp(i));
  }
  if (lipschitz == 0.0) throw ArgumentError("ridge_sum: amplitudes must not all be zero");

  // E[cos u cos w] = (E[cos(u + w)] + E[cos(u - w)]) / 2, and for independent
  // uniform coordinates E[cos(s^T x)] = prod_k mean_cos_uniform(s_k).
  auto mean_cos = [&](const Eigen::VectorXd& s) {
    double prod = 1.0;
    for (Index k = 0; k < s.size(); ++k) prod *= mean_cos_uniform(s(k));
    return prod;
  };
  Eigen::MatrixXd weights(r, r);
  for (Index i = 0; i < r; ++i) {
    for (Index j = i; j < r; ++j) {
      const double c = 0.5 * (mean_cos(d.col(i) + d.col(j)) + mean_cos(d.col(i) - d.col(j)));
      weights(i, j) = amp(i) * amp(j) * c;
      weights(j, i) = weights(i, j);
    }
  }
  const Eigen::MatrixXd e = d * weights * d.transpose();

  nlohmann::ordered_json dirs = nlohmann::ordered_json::array();
  for (const auto& di : directions) dirs.push_back(to_json_vector(di));
  nlohmann::ordered_json desc{{"kind", "ridge_sum"},
                              {"directions", std::move(dirs)},
                              {"amplitudes", to_json_vector(amp)}};

  auto gradient = [d, amp](const Eigen::VectorXd& x) {
    const Eigen::VectorXd proj = d.transpose() * x;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d.rows());
    for (Index i = 0; i < d.cols(); ++i) g += amp(i) * std::cos(proj(i)) * d.col(i);
    return g;
  };
  return SampledFunction(static_cast<std::size_t>(m), std::move(gradient),
                         hypercube_sampler(static_cast<std::size_t>(m)), lipschitz,
                         SymmetricMatrix(e, true), std::move(desc));
}

SampledFunction pad_inactive(const SampledFunction& f, std::size_t m_new) {
  const std::size_t m0 = f.dim();
  if (m_new < m0) throw ArgumentError("pad_inactive: target dimension is smaller than f's");
  const auto active = static_cast<Index>(m0);
  const auto total = static_cast<Index>(m_new);

  std::optional<SymmetricMatrix> e;
  if (f.analytic_E()) {
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(total, total);
    padded.topLeftCorner(active, active) = f.analytic_E()->entries();
    e = SymmetricMatrix(padded, true);
  }

  auto gradient = [f, active, total](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
    g.head(active) = f.gradient(x.head(active));
    return g;
  };
  auto sampler = [f, active, total](Rng& rng) {
    Eigen::VectorXd x(total);
    x.head(active) = f.sample_point(rng);
    std::uint64_t key = 0x5D2F0A1B3C4E6F70ULL;
    for (Index i = 0; i < active; ++i) key = mix64(key ^ std::bit_cast<std::uint64_t>(x(i)));
    Rng aux(key);
    for (Index i = active; i < total; ++i) x(i) = aux.uniform(-1.0, 1.0);
    return x;
  };

  nlohmann::ordered_json desc = f.description();
  desc["pad_to"] = m_new;
  return SampledFunction(m_new, std::move(gradient), std::move(sampler), f.lipschitz_L(),
                         std::move(e), std::move(desc));
}

}  // namespace activesub
