#include "ecm/error.hpp"
#include "ecm/experiments.hpp"
#include "ecm/gramian.hpp"
#include "ecm/metric.hpp"
#include "ecm/stembud.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ecm;

namespace {

Matrix line3() {
  Matrix A = Matrix::Zero(3, 3);
  A(1, 0) = 0.9;
  A(2, 1) = 0.7;
  return A;
}

Matrix e(Index n, Index k) { return Matrix::Identity(n, n).col(k); }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "expected an ecm::Error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(BuildSystem, SmallestSystemIsValid) {
  const auto sys = build_system(Matrix::Zero(1, 1), Matrix::Ones(1, 1));
  EXPECT_EQ(sys.n(), 1);
  EXPECT_EQ(sys.m(), 1);
}

TEST(BuildSystem, SixNodeStemBud) {
  const int inputs[] = {1, 3};
  const auto sys = build_stembud(stembud6_spec(2), inputs);
  EXPECT_DOUBLE_EQ(sys.A()(1, 0), 0.9);
  EXPECT_DOUBLE_EQ(sys.A()(1, 5), 0.7);
  EXPECT_DOUBLE_EQ(sys.B()(2, 1), 1.0);
}

TEST(BuildSystem, RejectsBadShapesAndValues) {
  EXPECT_EQ(code_of([] { build_system(Matrix::Zero(2, 2), Matrix::Ones(3, 1)); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { build_system(Matrix::Zero(2, 3), Matrix::Ones(2, 1)); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { build_system(Matrix::Zero(2, 2), Matrix::Ones(2, 3)); }),
            ErrorCode::DimensionMismatch);
  Matrix A = Matrix::Zero(2, 2);
  A(0, 1) = std::nan("");
  EXPECT_EQ(code_of([&] { build_system(A, Matrix::Ones(2, 1)); }), ErrorCode::NonFinite);
}

TEST(BuildSystem, EdgeWeightTouchesSingleEntry) {
  const auto sys = build_system(Matrix::Zero(3, 3), Matrix::Identity(3, 3));
  const auto mod = sys.with_edge_weight(Edge{0, 2}, 0.4);
  Matrix expected = Matrix::Zero(3, 3);
  expected(2, 0) = 0.4;
  EXPECT_EQ(mod.A(), expected);
  EXPECT_EQ(code_of([&] { sys.with_edge_weight(Edge{0, 3}, 1.0); }), ErrorCode::IndexOutOfRange);
}

TEST(FiniteGramian, ZeroDynamicsGivesInputProjection) {
  const auto g = finite_gramian(build_system(Matrix::Zero(2, 2), Matrix::Identity(2, 2)), 3);
  EXPECT_EQ(g.W, Matrix::Identity(2, 2));
  EXPECT_TRUE(g.symmetrized);
}

TEST(FiniteGramian, LineByHand) {
  const auto g = finite_gramian(build_system(line3(), e(3, 0)), 3);
  Matrix expected = Matrix::Zero(3, 3);
  expected.diagonal() << 1.0, 0.81, 0.3969;
  EXPECT_LT((g.W - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FiniteGramian, StemBudLineTrace) {
  const int inputs[] = {1, 3};
  const auto g = finite_gramian(build_stembud(stembud6_spec(0), inputs), 12);
  EXPECT_NEAR(g.W.trace(), 4.63, 0.005);
}

TEST(FiniteGramian, MatchesSeriesOracleAndInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 6;
    const Matrix A = oracle::random_matrix(rng, n, n, -0.6, 0.6);
    const Matrix B = oracle::random_matrix(rng, n, 2, -1, 1);
    const auto sys = build_system(A, B);
    const int T = 1 + trial % 9;
    const auto g = finite_gramian(sys, T);
    const Matrix ref = oracle::gramian_series(A, B, T);
    EXPECT_LT(oracle::max_rel_diff(g.W, ref), 1e-12);
    EXPECT_LE(g.asymmetry, 1e-10 * (1 + g.W.norm()));
    EXPECT_GE(g.min_eig, -1e-10 * (1 + g.W.trace()));

    // Monotone in T.
    const Matrix next = finite_gramian(sys, T + 1).W;
    Eigen::SelfAdjointEigenSolver<Matrix> es(next - g.W);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);

    // Additive over inputs.
    Matrix sum = Matrix::Zero(n, n);
    for (Index k = 0; k < B.cols(); ++k) sum += gramian_matrix(A, B.col(k), T);
    EXPECT_LT((sum - g.W).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(FiniteGramian, RejectsNonPositiveHorizon) {
  const auto sys = build_system(line3(), e(3, 0));
  EXPECT_EQ(code_of([&] { finite_gramian(sys, 0); }), ErrorCode::InvalidArgument);
}

TEST(InfiniteGramian, ZeroDynamics) {
  Matrix B(2, 1);
  B << 1.0, 2.0;
  const auto g = infinite_gramian(build_system(Matrix::Zero(2, 2), B));
  EXPECT_LT((g.W - B * B.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(InfiniteGramian, ScalarGeometricSeries) {
  const auto g = infinite_gramian(build_system(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1)));
  EXPECT_NEAR(g.W(0, 0), 4.0 / 3.0, 1e-14);
}

TEST(InfiniteGramian, MatchesLongFiniteHorizonAndDominatesIt) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix A = oracle::random_matrix(rng, 8, 8, -1, 1);
    A *= 0.8 / oracle::spectral_radius(A);
    const Matrix B = oracle::random_matrix(rng, 8, 3, -1, 1);
    const auto sys = build_system(A, B);
    const auto inf = infinite_gramian(sys);
    const Matrix bbt = B * B.transpose();
    EXPECT_LE(inf.residual, 1e-10 * bbt.norm());
    EXPECT_LE((inf.W - finite_gramian(sys, 500).W).norm(), 1e-8);
    for (int T : {1, 5, 20}) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(inf.W - finite_gramian(sys, T).W);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
  }
}

TEST(InfiniteGramian, RejectsUnstable) {
  const auto sys = build_system(Matrix::Constant(1, 1, 1.0), Matrix::Ones(1, 1));
  EXPECT_EQ(code_of([&] { infinite_gramian(sys); }), ErrorCode::UnstableSystem);
}

TEST(SolveStein, ScalarForcing) {
  const Matrix X = solve_stein(Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 3.0));
  EXPECT_NEAR(X(0, 0), 4.0, 1e-14);
}

TEST(StabilityInfo, ZeroAndTwoCycle) {
  const auto z = stability_info(Matrix::Zero(3, 3));
  EXPECT_EQ(z.rho, 0.0);
  EXPECT_TRUE(z.stable);
  Matrix A = Matrix::Zero(2, 2);
  A(1, 0) = A(0, 1) = 0.9;
  const auto c = stability_info(A);
  EXPECT_NEAR(c.rho, 0.9, 1e-12);
  EXPECT_TRUE(c.stable);
}

TEST(StabilityInfo, NilpotentIsExactlyZero) {
  Matrix A = Matrix::Zero(5, 5);
  for (Index i = 1; i < 5; ++i) A(i, i - 1) = 3.0;
  EXPECT_EQ(spectral_radius(A), 0.0);
}

TEST(StabilityInfo, MatchesDenseEigensolve) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 9;
    const Matrix A = oracle::random_matrix(rng, n, n, -1.5, 1.5, 0.3);
    EXPECT_NEAR(spectral_radius(A), oracle::spectral_radius(A), 1e-8);
  }
}

TEST(EvaluateMetric, Identity) {
  const Matrix W = Matrix::Identity(2, 2);
  EXPECT_DOUBLE_EQ(evaluate_metric(W, MetricId::trace()), 2.0);
  EXPECT_DOUBLE_EQ(evaluate_metric(W, MetricId::log_det()), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_metric(W, MetricId::neg_trace_inv()), -2.0);
  EXPECT_DOUBLE_EQ(evaluate_metric(W, MetricId::lambda_min()), 1.0);
}

TEST(EvaluateMetric, Diagonal) {
  Matrix W = Matrix::Zero(2, 2);
  W.diagonal() << 1.0, 2.0;
  EXPECT_NEAR(evaluate_metric(W, MetricId::log_det()), std::log(2.0), 1e-15);
  EXPECT_NEAR(evaluate_metric(W, MetricId::neg_trace_inv()), -1.5, 1e-15);
  EXPECT_NEAR(evaluate_metric(W, MetricId::lambda_i(1)), 2.0, 1e-15);
  EXPECT_NEAR(evaluate_metric(W, MetricId::lambda_min()), 1.0, 1e-15);
}

TEST(EvaluateMetric, StemBudLineLogDet) {
  const int inputs[] = {1, 3};
  const auto g = finite_gramian(build_stembud(stembud6_spec(0), inputs), 12);
  EXPECT_NEAR(evaluate_metric(g, MetricId::log_det()), -2.7, 0.05);
}

TEST(EvaluateMetric, SingularGramian) {
  Matrix W = Matrix::Zero(2, 2);
  W(0, 0) = 1.0;
  EXPECT_EQ(code_of([&] { evaluate_metric(W, MetricId::log_det()); }), ErrorCode::SingularGramian);
  EXPECT_EQ(code_of([&] { evaluate_metric(W, MetricId::neg_trace_inv()); }),
            ErrorCode::SingularGramian);
  EXPECT_DOUBLE_EQ(evaluate_metric(W, MetricId::trace()), 1.0);
}

TEST(MetricId, ParsesNamesAndIndices) {
  EXPECT_EQ(MetricId::parse("trace"), MetricId::trace());
  EXPECT_EQ(MetricId::parse("logdet"), MetricId::log_det());
  EXPECT_EQ(MetricId::parse("trinv"), MetricId::neg_trace_inv());
  EXPECT_EQ(MetricId::parse("lambda-min"), MetricId::lambda_min());
  EXPECT_EQ(MetricId::parse("lambda-2"), MetricId::lambda_i(2));
  EXPECT_EQ(MetricId::lambda_min().eigen_index(4), 4);
  EXPECT_EQ(code_of([] { MetricId::parse("bogus"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { MetricId::lambda_i(5).eigen_index(3); }), ErrorCode::InvalidArgument);
}

TEST(ControlEnergy, Examples) {
  const Vector x1 = Vector::Unit(2, 0);
  EXPECT_DOUBLE_EQ(control_energy(Matrix::Identity(2, 2), x1), 1.0);
  Matrix W = Matrix::Zero(2, 2);
  W.diagonal() << 4.0, 1.0;
  EXPECT_NEAR(control_energy(W, Vector::Ones(2)), 1.25, 1e-15);
}

TEST(ControlEnergy, EigenEnergyIsReciprocalEigenvalue) {
  std::mt19937_64 rng(8);
  const Matrix A = oracle::random_matrix(rng, 5, 5, -0.4, 0.4);
  const auto g = finite_gramian(build_system(A, Matrix::Identity(5, 5)), 6);
  const auto se = sorted_eigen(g.W);
  for (Index i = 0; i < 5; ++i)
    EXPECT_NEAR(control_energy(g, se.vectors.col(i)) * se.values(i), 1.0, 1e-10);
  EXPECT_NEAR(evaluate_metric(g, MetricId::lambda_min()) *
                  control_energy(g, se.vectors.col(4)),
              1.0, 1e-8);
}
