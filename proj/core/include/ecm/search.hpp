#pragma once

#include "ecm/centrality.hpp"
#include "ecm/curve_fit.hpp"
#include "ecm/error.hpp"

#include <optional>
#include <vector>

namespace ecm {

/// Adds w to the weight of edge from -> to, i.e. A + w e_to e_from^T.
struct EdgeMod {
  Edge edge;
  double w = 0.0;
};

NetworkSystem apply_edge_mod(const NetworkSystem& sys, const EdgeMod& mod);
/// Restores the entry touched by `mod` to `original_weight` (bit-exact).
NetworkSystem revert_edge_mod(const NetworkSystem& modified, const EdgeMod& mod,
                              double original_weight);

struct SearchOptions {
  bool include_self_loops = false;
  /// Let destabilizing modifications compete for f_EX.
  bool include_unstable_in_best = false;
  /// <= 0 uses default_thread_count().
  int threads = 0;
};

struct EdgeEvaluation {
  Edge edge;
  /// NaN when the metric could not be evaluated (see `error`).
  double value = 0.0;
  bool stable = true;
  std::optional<ErrorCode> error;
};

struct SearchReport {
  MetricId metric = MetricId::trace();
  int T = 1;
  double w = 0.0;
  double f_I = 0.0;
  std::vector<EdgeEvaluation> table;
  /// Best admissible row; nullopt when no row qualifies.
  std::optional<Edge> best_edge;
  double f_EX = 0.0;
  /// Top-ranked signed ECM edge and the metric after modifying it.
  std::optional<Edge> ecm_edge;
  std::optional<double> f_EC;
  std::optional<double> f_g;
  double seconds = 0.0;

  const EdgeEvaluation* find(Edge e) const;
};

/// All n(n-1) off-diagonal modifications (n^2 with self-loops).
SearchReport exhaustive_search(const NetworkSystem& sys, int T, MetricId metric, double w,
                               const SearchOptions& opts = {});

/// Several metrics sharing one Gramian per candidate. Reports follow `metrics`.
std::vector<SearchReport> exhaustive_search(const NetworkSystem& sys, int T,
                                            std::span<const MetricId> metrics, double w,
                                            const SearchOptions& opts = {});

/// Fills ecm_edge / f_EC of an exhaustive report from the signed ECM ranking.
void attach_ecm_choice(SearchReport& report, const NetworkSystem& sys);

/// Evaluates only the top-k signed ECM edges; f_EC is the top-1 value and
/// f_EX the best admissible value among the k.
SearchReport ecm_guided_search(const NetworkSystem& sys, int T, MetricId metric, double w, int k,
                               const SearchOptions& opts = {});

struct GlobalEstimate {
  double f_g = 0.0;
  double h_g = 0.0;
  std::vector<Edge> edges;
  std::vector<double> h_bar;
  std::vector<double> f_bar;
  FitDiagnostics diagnostics;
};

/// Bound-plus-curve-fit estimate of f_EX for Trace or LogDet. When `table` is
/// given, f values of the candidates are read from it instead of recomputed.
GlobalEstimate global_estimate(const NetworkSystem& sys, int T, MetricId metric, double w,
                               int k = 30, const SearchReport* table = nullptr);

}  // namespace ecm
