#pragma once

#include "ecm/gradient.hpp"

#include <set>
#include <vector>

namespace ecm {

enum class RankMode { Signed, Absolute };
enum class ExistingEdgePolicy { Include, OnlyNew, OnlyExisting };

struct RankOptions {
  bool exclude_self_loops = true;
  ExistingEdgePolicy existing = ExistingEdgePolicy::Include;
  RankMode mode = RankMode::Signed;
};

struct RankedEdge {
  Edge edge;
  double value = 0.0;  // Theta_P(to, from)
  /// Sign of the weight change that increases the metric to first order.
  int recommended_sign = 1;
};

struct EcmReport {
  ThetaResult theta;
  MetricId metric = MetricId::trace();
  /// 0-based input columns that contributed to theta.total.
  std::vector<Index> inputs;
  /// Adjacency of the analysed system (used by the existing-edge filter).
  Matrix adjacency;
  RankOptions options;
  std::vector<RankedEdge> ranked_edges;
};

/// ECM for `metric` restricted to the given input columns (0-based). The
/// weight matrix P always comes from the Gramian of the full input set.
EcmReport compute_ecm(const NetworkSystem& sys, int T, MetricId metric,
                      std::span<const Index> input_subset, const RankOptions& opts = {});
EcmReport compute_ecm(const NetworkSystem& sys, int T, MetricId metric,
                      const RankOptions& opts = {});

/// Sorted candidate list. Ties are broken by smallest (from, then to).
/// Throws EmptyCandidateSet if the filters leave nothing.
std::vector<RankedEdge> rank_edges(const EcmReport& report, const RankOptions& opts);
std::vector<RankedEdge> rank_edges(const Matrix& theta, const Matrix& adjacency,
                                   const RankOptions& opts);

struct SparsityPattern {
  /// (row j, col i) positions, row-major order.
  std::vector<std::pair<Index, Index>> positions;
  std::set<Index> sub_diagonals;
  std::set<Index> super_diagonals;
  bool main_diagonal = false;
};

/// Entries with |theta(j,i)| > tol * max|theta|.
SparsityPattern sparsity_pattern(const Matrix& theta, double tol = 1e-10);

}  // namespace ecm
