#include "ecm/search.hpp"

#include "ecm/bounds.hpp"
#include "ecm/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace ecm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Edge> candidate_edges(Index n, bool self_loops) {
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (self_loops || i != j) edges.push_back(Edge{i, j});
  return edges;
}

void check_horizon(int T) {
  if (T < 1) fail(ErrorCode::InvalidArgument, "finite horizon needs T >= 1");
}

void check_weight(double w) {
  if (!std::isfinite(w)) fail(ErrorCode::NonFinite, "weight change must be finite");
}

// Evaluates every metric for each edge, sharing the Gramian.
std::vector<std::vector<EdgeEvaluation>> evaluate_edges(const NetworkSystem& sys, int T,
                                                        std::span<const MetricId> metrics,
                                                        double w, const std::vector<Edge>& edges,
                                                        int threads) {
  std::vector<std::vector<EdgeEvaluation>> rows(metrics.size(),
                                                std::vector<EdgeEvaluation>(edges.size()));
  parallel_for(edges.size(), threads, [&](std::size_t k) {
    Matrix A = sys.A();
    A(edges[k].to, edges[k].from) += w;
    const bool stable = stability_info(A).rho < 1.0;
    const Matrix W = gramian_matrix(A, sys.B(), T);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      EdgeEvaluation& e = rows[m][k];
      e.edge = edges[k];
      e.stable = stable;
      try {
        e.value = evaluate_metric(W, metrics[m]);
      } catch (const Error& err) {
        e.value = kNaN;
        e.error = err.code();
      }
    }
  });
  return rows;
}

void select_best(SearchReport& r, bool include_unstable) {
  r.best_edge.reset();
  r.f_EX = kNaN;
  for (const auto& e : r.table) {
    if (e.error || std::isnan(e.value)) continue;
    if (!e.stable && !include_unstable) continue;
    // Strict comparison keeps the first (smallest) edge on ties.
    if (!r.best_edge || e.value > r.f_EX) {
      r.best_edge = e.edge;
      r.f_EX = e.value;
    }
  }
}

}  // namespace

NetworkSystem apply_edge_mod(const NetworkSystem& sys, const EdgeMod& mod) {
  check_edge(sys.n(), mod.edge);
  return sys.with_edge_weight(mod.edge, sys.weight(mod.edge) + mod.w);
}

NetworkSystem revert_edge_mod(const NetworkSystem& modified, const EdgeMod& mod,
                              double original_weight) {
  check_edge(modified.n(), mod.edge);
  return modified.with_edge_weight(mod.edge, original_weight);
}

const EdgeEvaluation* SearchReport::find(Edge e) const {
  for (const auto& row : table)
    if (row.edge == e) return &row;
  return nullptr;
}

std::vector<SearchReport> exhaustive_search(const NetworkSystem& sys, int T,
                                            std::span<const MetricId> metrics, double w,
                                            const SearchOptions& opts) {
  check_horizon(T);
  check_weight(w);
  const auto start = std::chrono::steady_clock::now();
  const Matrix W0 = gramian_matrix(sys.A(), sys.B(), T);
  std::vector<SearchReport> reports(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    reports[m].metric = metrics[m];
    reports[m].T = T;
    reports[m].w = w;
    reports[m].f_I = evaluate_metric(W0, metrics[m]);
  }
  const auto edges = candidate_edges(sys.n(), opts.include_self_loops);
  auto rows = evaluate_edges(sys, T, metrics, w, edges, opts.threads);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    reports[m].table = std::move(rows[m]);
    select_best(reports[m], opts.include_unstable_in_best);
    reports[m].seconds = seconds;
  }
  return reports;
}

SearchReport exhaustive_search(const NetworkSystem& sys, int T, MetricId metric, double w,
                               const SearchOptions& opts) {
  const MetricId one[] = {metric};
  return std::move(exhaustive_search(sys, T, one, w, opts).front());
}

void attach_ecm_choice(SearchReport& report, const NetworkSystem& sys) {
  const EcmReport ecm = compute_ecm(sys, report.T, report.metric);
  const Edge top = ecm.ranked_edges.front().edge;
  report.ecm_edge = top;
  if (const EdgeEvaluation* row = report.find(top)) {
    report.f_EC = row->value;
  } else {
    const NetworkSystem mod = apply_edge_mod(sys, {top, report.w});
    report.f_EC = evaluate_metric(gramian_matrix(mod.A(), mod.B(), report.T), report.metric);
  }
}

SearchReport ecm_guided_search(const NetworkSystem& sys, int T, MetricId metric, double w, int k,
                               const SearchOptions& opts) {
  check_horizon(T);
  check_weight(w);
  if (k < 1) fail(ErrorCode::InvalidArgument, "top-k needs k >= 1");
  const auto start = std::chrono::steady_clock::now();
  RankOptions rank;
  rank.exclude_self_loops = !opts.include_self_loops;
  const EcmReport ecm = compute_ecm(sys, T, metric, rank);

  std::vector<Edge> edges;
  for (const auto& r : ecm.ranked_edges) {
    if (static_cast<int>(edges.size()) == k) break;
    edges.push_back(r.edge);
  }

  SearchReport report;
  report.metric = metric;
  report.T = T;
  report.w = w;
  report.f_I = evaluate_metric(gramian_matrix(sys.A(), sys.B(), T), metric);
  const MetricId one[] = {metric};
  report.table = std::move(evaluate_edges(sys, T, one, w, edges, opts.threads).front());
  report.ecm_edge = edges.front();
  report.f_EC = report.table.front().value;
  select_best(report, opts.include_unstable_in_best);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

GlobalEstimate global_estimate(const NetworkSystem& sys, int T, MetricId metric, double w, int k,
                               const SearchReport* table) {
  check_horizon(T);
  check_weight(w);
  const bool log_det = metric.kind() == MetricId::Kind::LogDet;
  if (metric.kind() != MetricId::Kind::Trace && !log_det)
    fail(ErrorCode::InvalidArgument, "global estimate supports trace and logdet only");
  if (k < 1) fail(ErrorCode::InvalidArgument, "top-k needs k >= 1");

  const XConstants c = x_constants(sys, w);
  const double n = static_cast<double>(sys.n());
  if (log_det && !(gramian_matrix(sys.A(), sys.B(), T).trace() > 1.0))
    fail(ErrorCode::PreconditionViolated, "log-det estimate needs tr(W) > 1");
  auto to_metric_scale = [&](double tr) { return log_det ? 2.0 * n * std::log(tr / std::sqrt(n)) : tr; };

  GlobalEstimate out;
  const double tau = (1.0 + c.alpha * c.beta) * c.trace_hx + c.alpha * c.alpha * c.gamma * c.gamma_bar;
  out.h_g = to_metric_scale(tau);

  const EcmReport ecm = compute_ecm(sys, T, metric);
  const Matrix absA = sys.A().cwiseAbs();
  const Matrix absB = sys.B().cwiseAbs();
  for (const auto& r : ecm.ranked_edges) {
    if (static_cast<int>(out.edges.size()) == k) break;
    Matrix modified = absA;
    modified(r.edge.to, r.edge.from) += std::abs(w);
    if (!(spectral_radius(modified) < 1.0))
      fail(ErrorCode::PreconditionViolated, "rho(|A| + |w| e_j e_i^T) >= 1 for a candidate edge");
    const Matrix YB = modified_abs_resolvent(c.X, r.edge, w) * absB;
    out.edges.push_back(r.edge);
    out.h_bar.push_back(to_metric_scale(YB.squaredNorm()));
  }

  const EdgeEvaluation* rows = nullptr;
  std::vector<EdgeEvaluation> fresh;
  if (table == nullptr) {
    const MetricId one[] = {metric};
    fresh = std::move(evaluate_edges(sys, T, one, w, out.edges, 1).front());
    rows = fresh.data();
  }
  for (std::size_t e = 0; e < out.edges.size(); ++e) {
    const EdgeEvaluation* row = rows ? rows + e : table->find(out.edges[e]);
    if (row == nullptr) fail(ErrorCode::InvalidArgument, "search table lacks a candidate edge");
    if (row->error) fail(*row->error, "metric undefined on a candidate edge");
    out.f_bar.push_back(row->value);
  }

  const CurveEstimate est = estimate_curve(out.h_bar, out.f_bar, out.h_g);
  out.f_g = est.value;
  out.diagnostics = est.diagnostics;
  return out;
}

}  // namespace ecm
