#include "ecm/centrality.hpp"

#include "ecm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ecm {

EcmReport compute_ecm(const NetworkSystem& sys, int T, MetricId metric,
                      std::span<const Index> input_subset, const RankOptions& opts) {
  if (input_subset.empty()) fail(ErrorCode::InvalidInput, "input subset is empty");
  std::vector<Index> inputs(input_subset.begin(), input_subset.end());
  for (Index k : inputs)
    if (k < 0 || k >= sys.m())
      fail(ErrorCode::InvalidInput, "input index " + std::to_string(k) + " out of range");

  const Matrix W = gramian_matrix(sys.A(), sys.B(), T);
  const Matrix P = metric_weight_matrix(W, metric);
  ThetaResult full = theta_matrix(sys, T, P);

  EcmReport report;
  report.metric = metric;
  report.inputs = inputs;
  report.adjacency = sys.A();
  report.options = opts;
  report.theta.T = T;
  report.theta.P_used = P;
  report.theta.total = Matrix::Zero(sys.n(), sys.n());
  for (Index k : inputs) {
    report.theta.per_input.push_back(full.per_input[static_cast<std::size_t>(k)]);
    report.theta.total += full.per_input[static_cast<std::size_t>(k)];
  }
  report.ranked_edges = rank_edges(report.theta.total, report.adjacency, opts);
  return report;
}

EcmReport compute_ecm(const NetworkSystem& sys, int T, MetricId metric,
                      const RankOptions& opts) {
  std::vector<Index> all(static_cast<std::size_t>(sys.m()));
  std::iota(all.begin(), all.end(), Index{0});
  return compute_ecm(sys, T, metric, all, opts);
}

std::vector<RankedEdge> rank_edges(const Matrix& theta, const Matrix& adjacency,
                                   const RankOptions& opts) {
  const Index n = theta.rows();
  std::vector<RankedEdge> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (opts.exclude_self_loops && i == j) continue;
      const bool exists = adjacency(j, i) != 0.0;
      if (opts.existing == ExistingEdgePolicy::OnlyNew && exists) continue;
      if (opts.existing == ExistingEdgePolicy::OnlyExisting && !exists) continue;
      const double v = theta(j, i);
      out.push_back({Edge{i, j}, v, v < 0.0 ? -1 : 1});
    }
  }
  if (out.empty()) fail(ErrorCode::EmptyCandidateSet, "rank filters removed every edge");

  const bool absolute = opts.mode == RankMode::Absolute;
  std::stable_sort(out.begin(), out.end(), [absolute](const RankedEdge& a, const RankedEdge& b) {
    const double ka = absolute ? std::abs(a.value) : a.value;
    const double kb = absolute ? std::abs(b.value) : b.value;
    if (ka != kb) return ka > kb;
    return a.edge < b.edge;
  });
  return out;
}

std::vector<RankedEdge> rank_edges(const EcmReport& report, const RankOptions& opts) {
  return rank_edges(report.theta.total, report.adjacency, opts);
}

SparsityPattern sparsity_pattern(const Matrix& theta, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorCode::InvalidArgument, "tol must lie in (0, 1)");
  SparsityPattern pat;
  const double peak = theta.size() ? theta.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) return pat;
  const double threshold = tol * peak;
  for (Index j = 0; j < theta.rows(); ++j) {
    for (Index i = 0; i < theta.cols(); ++i) {
      if (std::abs(theta(j, i)) <= threshold) continue;
      pat.positions.emplace_back(j, i);
      if (j > i)
        pat.sub_diagonals.insert(j - i);
      else if (i > j)
        pat.super_diagonals.insert(i - j);
      else
        pat.main_diagonal = true;
    }
  }
  return pat;
}

}  // namespace ecm
