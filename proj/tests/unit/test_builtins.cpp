#include "activesub/bounds.hpp"
#include "activesub/builtins.hpp"
#include "activesub/errors.hpp"
#include "activesub/function_spec.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace activesub;

TEST(Linear, AnalyticQuantities) {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
  e1(0) = 1.0;
  const SampledFunction f = builtin_linear(e1);
  EXPECT_EQ(f.analytic_E()->entries(), Eigen::MatrixXd(e1 * e1.transpose()));

  const SampledFunction g = builtin_linear(Eigen::Vector2d(1.0, 1.0) / std::sqrt(2.0));
  const ProblemParams p = problem_params(g, 0.1);
  EXPECT_NEAR(p.norm_E, 1.0, 1e-15);
  EXPECT_EQ(p.intdim_E, 1.0);
}

TEST(Linear, SmoothnessRatioIsOne) {
  for (const Eigen::Vector3d& c : {Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.1, 0, -0.2)}) {
    EXPECT_NEAR(problem_params(builtin_linear(c), 0.1).smoothness_ratio(), 1.0, 1e-14);
  }
  EXPECT_THROW(builtin_linear(Eigen::Vector2d::Zero()), ArgumentError);
}

TEST(Quadratic, HandIntegratedExamples) {
  const SampledFunction a = builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector2d(1.0, 0.0)));
  EXPECT_EQ(a.analytic_E()->entries(), Eigen::Matrix2d(Eigen::Vector2d(1.0 / 3.0, 0.0).asDiagonal()));
  EXPECT_EQ(a.lipschitz_L(), 1.0);

  const SampledFunction b = builtin_quadratic(SymmetricMatrix::identity(2));
  EXPECT_EQ(b.analytic_E()->entries(), Eigen::Matrix2d(Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0).asDiagonal()));
  EXPECT_DOUBLE_EQ(b.lipschitz_L(), std::sqrt(2.0));

  const SampledFunction c = builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector2d(2.0, 1.0)));
  EXPECT_DOUBLE_EQ(problem_params(c, 0.1).intdim_E, 1.25);
}

TEST(Quadratic, MatchesIndependentOracle) {
  Rng rng(3);
  for (int m = 2; m <= 7; ++m) {
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
    const SampledFunction f = builtin_quadratic(SymmetricMatrix(a));
    EXPECT_LE((f.analytic_E()->entries() - a * a / 3.0).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(f.lipschitz_L(), oracle::vertex_max_norm(a), 1e-14);
  }
}

TEST(Quadratic, MonteCarloAgreesWithAnalyticE) {
  const SampledFunction f = builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector3d(1.0, -0.5, 0.2)));
  const EstimatorResult r = estimate(draw_batch(f, 200000, 4), *f.analytic_E());
  EXPECT_LT(*r.rel_error, 0.02);
}

TEST(Quadratic, Limits) {
  EXPECT_THROW(builtin_quadratic(SymmetricMatrix::zero(3)), ArgumentError);
  EXPECT_THROW(builtin_quadratic(SymmetricMatrix::identity(21)), UnsupportedSize);
}

TEST(MeanCos, MatchesClosedForm) {
  for (double v : {0.0, 1e-8, 0.3, 1.0, 2.5, 10.0, 57.3, -4.0})
    EXPECT_NEAR(mean_cos_uniform(v), oracle::mean_cos_closed_form(v), 1e-14) << v;
}

TEST(RidgeSum, SingleDirectionVariance) {
  // sigma^2 = E[cos^2(d^T x)] for d = (0.6, 0.8); 40-digit reference value.
  const double sigma2 = 0.74261501753535719210746287101796297220;
  const SampledFunction f = builtin_ridge_sum({Eigen::Vector2d(0.6, 0.8)}, {1.0});
  const Eigen::Matrix2d expected = sigma2 * Eigen::Vector2d(0.6, 0.8) * Eigen::Vector2d(0.6, 0.8).transpose();
  EXPECT_LE((f.analytic_E()->entries() - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(f.lipschitz_L(), 1.0);
}

TEST(RidgeSum, ZeroAmplitudeDropsTerm) {
  const SampledFunction f = builtin_ridge_sum({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)}, {1.0, 0.0});
  const EigenSystem es = eig_sym(*f.analytic_E());
  EXPECT_EQ(numerical_rank(es), 1U);
}

TEST(RidgeSum, GapBetweenDifferentCoordinatePatterns) {
  // d1 = e1, d2 = (e2 + e3)/sqrt(2): E[cos u cos w] factorizes over coordinates.
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector3d d1(1, 0, 0), d2(0, r, r);
  const SampledFunction f = builtin_ridge_sum({d1, d2}, {1.0, 1.0});
  using oracle::mean_cos_closed_form;
  const double m11 = 0.5 + 0.5 * mean_cos_closed_form(2.0);
  const double m22 = 0.5 + 0.5 * std::pow(mean_cos_closed_form(std::sqrt(2.0)), 2);
  const double m12 = mean_cos_closed_form(1.0) * std::pow(mean_cos_closed_form(r), 2);
  const double gap = std::sqrt((m11 - m22) * (m11 - m22) + 4.0 * m12 * m12);
  const EigenSystem es = eig_sym(*f.analytic_E());
  EXPECT_NEAR(es.values(0) - es.values(1), gap, 1e-8);
  EXPECT_NEAR(es.values(0) + es.values(1), m11 + m22, 1e-12);
}

TEST(RidgeSum, MonteCarloAgreesWithAnalyticE) {
  const double r = 1.0 / std::sqrt(2.0);
  const SampledFunction f =
      builtin_ridge_sum({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, r, r)}, {2.0, -1.0});
  const EstimatorResult est = estimate(draw_batch(f, 200000, 8), *f.analytic_E());
  EXPECT_LT(*est.rel_error, 0.02);
}

TEST(RidgeSum, Validation) {
  EXPECT_THROW(builtin_ridge_sum({Eigen::Vector2d(1, 1)}, {1.0}), ArgumentError);
  EXPECT_THROW(builtin_ridge_sum({Eigen::Vector2d(1, 0)}, {1.0, 2.0}), ArgumentError);
  EXPECT_THROW(builtin_ridge_sum({Eigen::Vector2d(1, 0)}, {0.0}), ArgumentError);
  EXPECT_THROW(builtin_ridge_sum({Eigen::Vector2d(1, 0), Eigen::Vector3d(0, 1, 0)}, {1.0, 1.0}),
               ArgumentError);
}

TEST(PadInactive, GradientStreamUnchanged) {
  const SampledFunction f = builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector3d(1.0, 0.5, 0.25)));
  const SampledFunction g = pad_inactive(f, 8);
  ASSERT_EQ(g.dim(), 8U);
  EXPECT_EQ(g.lipschitz_L(), f.lipschitz_L());
  const SampleBatch a = draw_batch(f, 40, 12);
  const SampleBatch b = draw_batch(g, 40, 12);
  EXPECT_EQ(b.vectors.leftCols(3), a.vectors);
  EXPECT_TRUE((b.vectors.rightCols(5).array() == 0.0).all());
  EXPECT_EQ(g.analytic_E()->entries().topLeftCorner(3, 3), f.analytic_E()->entries());
  EXPECT_EQ(*estimate(b, *g.analytic_E()).rel_error, *estimate(a, *f.analytic_E()).rel_error);
}

TEST(PadInactive, RejectsShrinking) {
  EXPECT_THROW(pad_inactive(builtin_linear(Eigen::Vector3d(1, 0, 0)), 2), ArgumentError);
}

TEST(FunctionSpec, BuildsEachKind) {
  const auto lin = function_from_json(nlohmann::json::parse(R"({"kind":"linear","c":[1,2]})"));
  EXPECT_EQ(lin.dim(), 2U);
  const auto quad = function_from_json(nlohmann::json::parse(R"({"kind":"quadratic","A":[[1,0],[0,2]]})"));
  EXPECT_EQ(quad.analytic_E()->entries()(1, 1), 4.0 / 3.0);
  const auto ridge = function_from_json(
      nlohmann::json::parse(R"({"kind":"ridge_sum","directions":[[1,0,0]],"amplitudes":[1.5]})"));
  EXPECT_EQ(ridge.lipschitz_L(), 1.5);
  const auto padded = function_from_json(nlohmann::json::parse(R"({"kind":"linear","c":[1],"pad_to":4})"));
  EXPECT_EQ(padded.dim(), 4U);
}

TEST(FunctionSpec, FieldLevelErrors) {
  auto message = [](const char* text) {
    try {
      function_from_json(nlohmann::json::parse(text));
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"kind":"quadratic","A":[[1,0],[0,1,2]]})").find("function.A: row 1"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"cubic"})").find("function.kind"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"linear"})").find("function.c"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"linear","c":[1,"x"]})").find("function.c[1]"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"linear","c":[1],"pad_to":0})").find("function.pad_to"), std::string::npos);
}
