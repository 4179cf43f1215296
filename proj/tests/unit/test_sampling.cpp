#include "activesub/builtins.hpp"
#include "activesub/errors.hpp"
#include "activesub/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace activesub;

namespace {

SampledFunction quadratic4() {
  return builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector4d(2.0, 1.0, 0.5, 0.25)));
}

SampledFunction constant_gradient(const Eigen::VectorXd& g, double lipschitz) {
  return SampledFunction(
      static_cast<std::size_t>(g.size()), [g](const Eigen::VectorXd&) { return g; },
      [n = g.size()](Rng& rng) {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.uniform01();
        return x;
      },
      lipschitz, std::nullopt, {{"kind", "constant"}});
}

}  // namespace

TEST(SampledFunction, ValidatesConstruction) {
  const Eigen::Vector2d g(1.0, 0.0);
  EXPECT_THROW(constant_gradient(g, 0.0), ArgumentError);
  auto grad = [g](const Eigen::VectorXd&) { return Eigen::VectorXd(g); };
  auto sampler = [](Rng&) { return Eigen::VectorXd::Zero(2).eval(); };
  EXPECT_THROW(SampledFunction(2, grad, sampler, 1.0, SymmetricMatrix::identity(3), {}), ArgumentError);
  EXPECT_THROW(SampledFunction(2, grad, sampler, 0.5, SymmetricMatrix::identity(2), {}), ArgumentError);
  EXPECT_THROW(SampledFunction(2, grad, sampler, 1.0,
                               SymmetricMatrix::diagonal(Eigen::Vector2d(1.0, -0.5)), {}),
               Error);
}

TEST(DrawBatch, LinearGivesConstantRows) {
  const Eigen::Vector3d c(0.5, -1.0, 2.0);
  const SampleBatch batch = draw_batch(builtin_linear(c), 25, 3);
  ASSERT_EQ(batch.n(), 25U);
  for (std::size_t j = 0; j < batch.n(); ++j) EXPECT_EQ(Eigen::Vector3d(batch.vectors.row(j)), c);
}

TEST(DrawBatch, DeterministicForSeed) {
  const SampledFunction f = quadratic4();
  const SampleBatch a = draw_batch(f, 100, 77);
  const SampleBatch b = draw_batch(f, 100, 77);
  const SampleBatch c = draw_batch(f, 100, 78);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_NE(a.vectors, c.vectors);
}

TEST(DrawBatch, RejectsGradientAboveBound) {
  EXPECT_THROW(draw_batch(constant_gradient(Eigen::Vector2d(1.0, 1.0), 1.0), 3, 1), ModelViolation);
  EXPECT_NO_THROW(draw_batch(constant_gradient(Eigen::Vector2d(1.0, 1.0), std::sqrt(2.0)), 3, 1));
}

TEST(DrawBatch, RejectsNonFiniteGradient) {
  EXPECT_THROW(draw_batch(constant_gradient(Eigen::Vector2d(NAN, 0.0), 1.0), 1, 1), ModelViolation);
}

TEST(DrawBatch, MeanGradientNormMatchesReferenceRun) {
  // Reference: the same statistic from a 10^6-sample run with an unrelated seed.
  const SampledFunction f = quadratic4();
  auto stats = [&](std::size_t n, std::uint64_t seed) {
    double s1 = 0.0, s2 = 0.0;
    for_each_gradient(f, n, seed, [&](std::size_t, const Eigen::VectorXd& z) {
      s1 += z.norm();
      s2 += z.squaredNorm();
    });
    const double mean = s1 / double(n);
    return std::make_pair(mean, std::sqrt((s2 / double(n) - mean * mean) / double(n)));
  };
  const auto [ref, ref_se] = stats(1000000, 999);
  const auto [mean, se] = stats(10000, 5);
  EXPECT_NEAR(mean, ref, 3.0 * std::hypot(se, ref_se));
}

TEST(Estimate, IdenticalVectorsGiveOuterProductExactly) {
  SampleBatch batch;
  const Eigen::Vector3d z(0.1, -0.3, 0.7);
  batch.vectors = z.transpose().replicate(7, 1);
  batch.lipschitz_L = 1.0;
  const EstimatorResult r = estimate(batch);
  EXPECT_EQ(r.e_hat.entries(), Eigen::Matrix3d(z * z.transpose()));
}

TEST(Estimate, TwoBasisVectors) {
  SampleBatch batch;
  batch.vectors = Eigen::Matrix2d::Identity();
  batch.lipschitz_L = 1.0;
  const EstimatorResult r = estimate(batch);
  EXPECT_EQ(r.e_hat.entries(), Eigen::Matrix2d(Eigen::Vector2d(0.5, 0.5).asDiagonal()));
  EXPECT_EQ(r.norm_e_hat, 0.5);
}

TEST(Estimate, LinearHasZeroRelativeError) {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const SampledFunction f = builtin_linear(Eigen::Vector3d(0.3, 1.0 / 3.0, -0.9));
    const EstimatorResult r = estimate(draw_batch(f, 17 * seed, seed), *f.analytic_E());
    EXPECT_EQ(*r.rel_error, 0.0);
  }
}

TEST(Estimate, NormBoundedBySquaredLipschitz) {
  const SampledFunction f = quadratic4();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EstimatorResult r = estimate(draw_batch(f, 5, seed));
    EXPECT_LE(r.norm_e_hat, f.lipschitz_L() * f.lipschitz_L());
  }
}

TEST(Estimate, RejectsEmptyBatch) {
  SampleBatch batch;
  batch.vectors.resize(0, 3);
  batch.lipschitz_L = 1.0;
  EXPECT_THROW(estimate(batch), ArgumentError);
}

TEST(RelativeError, MatchesDefinition) {
  const SymmetricMatrix e = SymmetricMatrix::diagonal(Eigen::Vector2d(2.0, 1.0));
  const SymmetricMatrix e_hat = SymmetricMatrix::diagonal(Eigen::Vector2d(2.5, 1.0));
  EXPECT_EQ(relative_error(e_hat, e), 0.25);
}

TEST(BatchCsv, HeaderAndRows) {
  const SampleBatch batch = draw_batch(builtin_linear(Eigen::Vector2d(1.0, 0.5)), 2, 9);
  std::ostringstream out;
  write_batch_csv(out, batch);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.front(), '#');
  std::getline(in, line);
  EXPECT_EQ(line, "z1,z2");
  std::getline(in, line);
  EXPECT_EQ(line, "1,0.5");
}
