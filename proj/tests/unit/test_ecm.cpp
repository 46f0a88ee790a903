#include "ecm/centrality.hpp"
#include "ecm/error.hpp"
#include "ecm/experiments.hpp"
#include "ecm/search.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ecm;

namespace {

NetworkSystem fig3_system(int y) {
  const int inputs[] = {1, 3};
  return build_stembud(stembud6_spec(y), inputs);
}

NetworkSystem random_system(std::mt19937_64& rng, Index n, Index m) {
  Matrix A = oracle::random_matrix(rng, n, n, -1, 1);
  A *= 0.8 / oracle::spectral_radius(A);
  return build_system(A, oracle::random_matrix(rng, n, m, -1, 1));
}

std::set<Index> set_of(std::initializer_list<Index> v) { return std::set<Index>(v); }

}  // namespace

TEST(ComputeEcm, FullSetIsHalfTheGradient) {
  std::mt19937_64 rng(1);
  const auto sys = random_system(rng, 5, 3);
  for (MetricId m : {MetricId::trace(), MetricId::log_det()}) {
    const auto rep = compute_ecm(sys, 7, m);
    const Matrix half = 0.5 * metric_gradient(sys, 7, m).G;
    EXPECT_LT(oracle::max_rel_diff(rep.theta.total, half), 1e-12);
  }
}

TEST(ComputeEcm, AdditiveOverInputSubsets) {
  const auto sys = fig3_system(2);
  for (MetricId m : {MetricId::trace(), MetricId::log_det()}) {
    const Index first[] = {0}, second[] = {1};
    const Matrix a = compute_ecm(sys, 12, m, first).theta.total;
    const Matrix b = compute_ecm(sys, 12, m, second).theta.total;
    const Matrix full = compute_ecm(sys, 12, m).theta.total;
    EXPECT_LT(oracle::max_rel_diff(a + b, full), 1e-12);
  }
}

TEST(ComputeEcm, StemBudJunctionTwoDiagonals) {
  const auto pat = sparsity_pattern(compute_ecm(fig3_system(2), 12, MetricId::trace()).theta.total);
  EXPECT_EQ(pat.sub_diagonals, set_of({1}));
  EXPECT_EQ(pat.super_diagonals, set_of({4}));
  EXPECT_FALSE(pat.main_diagonal);
}

TEST(ComputeEcm, RejectsBadSubsets) {
  const auto sys = fig3_system(2);
  const std::vector<Index> empty;
  const Index bad[] = {2};
  for (auto subset : {std::span<const Index>(empty), std::span<const Index>(bad)}) {
    try {
      compute_ecm(sys, 12, MetricId::trace(), subset);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
  }
}

TEST(RankEdges, AllTiesAtHorizonOneStartWithFirstEdge) {
  std::mt19937_64 rng(2);
  const auto rep = compute_ecm(random_system(rng, 4, 2), 1, MetricId::trace());
  ASSERT_EQ(rep.ranked_edges.size(), 12u);
  EXPECT_EQ(rep.ranked_edges[0].edge, (Edge{0, 1}));
  EXPECT_EQ(rep.ranked_edges[1].edge, (Edge{0, 2}));
  for (const auto& r : rep.ranked_edges) EXPECT_NE(r.edge.from, r.edge.to);
}

TEST(RankEdges, TopEdgeOfRingFamilyIsGlobalBest) {
  const auto sys = fig3_system(1);
  const auto rep = compute_ecm(sys, 12, MetricId::trace());
  const auto search = exhaustive_search(sys, 12, MetricId::trace(), 0.91);
  const auto* row = search.find(rep.ranked_edges.front().edge);
  ASSERT_NE(row, nullptr);
  EXPECT_NEAR(row->value, 11.7, 0.05);
  EXPECT_NEAR(search.f_EX, 11.7, 0.05);
}

TEST(RankEdges, SignedTopEdgeMaximizesFirstOrderGain) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = random_system(rng, 6, 2);
    const int T = 6;
    const auto rep = compute_ecm(sys, T, MetricId::trace());
    double best = -INFINITY;
    Edge best_edge;
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j) {
        if (i == j) continue;
        Matrix E = Matrix::Zero(6, 6);
        E(j, i) = 1.0;
        auto f = [&](const Matrix& A) { return gramian_matrix(A, sys.B(), T).trace(); };
        const double gain = oracle::directional_fd(f, sys.A(), E, 1e-6);
        if (gain > best) {
          best = gain;
          best_edge = Edge{i, j};
        }
      }
    EXPECT_EQ(rep.ranked_edges.front().edge, best_edge);
  }
}

TEST(RankEdges, OrderingModesAndFilters) {
  Matrix theta(3, 3);
  theta << 0.0, -5.0, 1.0,
           2.0, 9.0, 1.0,
           -3.0, 0.5, 0.0;
  Matrix adj = Matrix::Zero(3, 3);
  adj(1, 0) = 1.0;  // edge 1 -> 2 exists

  RankOptions signed_opts;
  const auto s = rank_edges(theta, adj, signed_opts);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s[0].edge, (Edge{0, 1}));  // theta(1,0) = 2
  EXPECT_EQ(s[1].edge, (Edge{2, 0}));  // ties at 1.0 broken by from
  EXPECT_EQ(s[2].edge, (Edge{2, 1}));
  EXPECT_EQ(s.back().edge, (Edge{1, 0}));

  RankOptions abs_opts;
  abs_opts.mode = RankMode::Absolute;
  const auto a = rank_edges(theta, adj, abs_opts);
  EXPECT_EQ(a[0].edge, (Edge{1, 0}));
  EXPECT_EQ(a[0].recommended_sign, -1);
  EXPECT_EQ(a[1].edge, (Edge{0, 2}));

  RankOptions loops;
  loops.exclude_self_loops = false;
  EXPECT_EQ(rank_edges(theta, adj, loops).front().edge, (Edge{1, 1}));

  RankOptions only_existing;
  only_existing.existing = ExistingEdgePolicy::OnlyExisting;
  const auto ex = rank_edges(theta, adj, only_existing);
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].edge, (Edge{0, 1}));

  RankOptions only_new;
  only_new.existing = ExistingEdgePolicy::OnlyNew;
  EXPECT_EQ(rank_edges(theta, adj, only_new).size(), 5u);

  try {
    rank_edges(theta, Matrix::Zero(3, 3), only_existing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCandidateSet);
  }
}

TEST(RankEdges, InvariantUnderPositiveScaling) {
  std::mt19937_64 rng(4);
  const Matrix theta = oracle::random_matrix(rng, 5, 5, -1, 1);
  const Matrix adj = Matrix::Zero(5, 5);
  const auto a = rank_edges(theta, adj, {});
  const auto b = rank_edges(3.7 * theta, adj, {});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].edge, b[k].edge);
}

TEST(SparsityPattern, ZeroMatrixIsEmpty) {
  const auto pat = sparsity_pattern(Matrix::Zero(4, 4));
  EXPECT_TRUE(pat.positions.empty());
  EXPECT_TRUE(pat.sub_diagonals.empty());
  EXPECT_TRUE(pat.super_diagonals.empty());
}

TEST(SparsityPattern, StemBudExtremes) {
  const auto five = sparsity_pattern(compute_ecm(fig3_system(5), 12, MetricId::trace()).theta.total);
  EXPECT_EQ(five.sub_diagonals, set_of({1, 3, 5}));
  EXPECT_EQ(five.super_diagonals, set_of({1, 3, 5}));
  const auto line = sparsity_pattern(compute_ecm(fig3_system(0), 12, MetricId::trace()).theta.total);
  EXPECT_EQ(line.sub_diagonals, set_of({1}));
  EXPECT_TRUE(line.super_diagonals.empty());
}

TEST(SparsityPattern, SameStructureForTraceAndLogDet) {
  for (int y = 0; y <= 5; ++y) {
    const auto sys = fig3_system(y);
    const auto t = sparsity_pattern(compute_ecm(sys, 12, MetricId::trace()).theta.total);
    const auto l = sparsity_pattern(compute_ecm(sys, 12, MetricId::log_det()).theta.total);
    EXPECT_EQ(t.positions, l.positions) << "y=" << y;
  }
}

TEST(SparsityPattern, PositionConvention) {
  Matrix theta = Matrix::Zero(3, 3);
  theta(2, 0) = 1.0;  // sub-diagonal 2
  theta(0, 1) = 1.0;  // super-diagonal 1
  theta(1, 1) = 1.0;
  const auto pat = sparsity_pattern(theta);
  EXPECT_EQ(pat.sub_diagonals, set_of({2}));
  EXPECT_EQ(pat.super_diagonals, set_of({1}));
  EXPECT_TRUE(pat.main_diagonal);
  ASSERT_EQ(pat.positions.size(), 3u);
  EXPECT_EQ(pat.positions[0], (std::pair<Index, Index>{0, 1}));
}

TEST(SparsityPattern, RejectsTolerance) {
  try {
    sparsity_pattern(Matrix::Identity(2, 2), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}
