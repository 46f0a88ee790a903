#pragma once

#include "ecm/metric.hpp"

#include <optional>

namespace ecm {

/// Resolvent X = (I - |A|)^{-1} of the entrywise-absolute adjacency and the
/// scalar constants built from it for a weight change w.
struct XConstants {
  Matrix X;
  double w = 0.0;
  /// max_{i != j} X(i, j) and the pair attaining it (as row, col).
  double max_off_diagonal = 0.0;
  Index argmax_row = 0;
  Index argmax_col = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double gamma_bar = 0.0;
  /// tr(X |B| |B|^T X^T)
  double trace_hx = 0.0;
};

/// Throws UnstableAbsSystem when rho(|A|) >= 1. Structural zeros of X (no path
/// from column node to row node) are exact zeros.
Matrix abs_resolvent(const Matrix& A);

/// Throws UnstableAbsSystem, or AlphaUndefined when 1 - |w| max X(i,j) <= 0.
XConstants x_constants(const NetworkSystem& sys, double w);

/// alpha_ij for a modification of edge i -> j, i.e. |w| / (1 - |w| X(i, j)).
double alpha_for_edge(const Matrix& X, Edge edge, double w);

/// (I - |A| - |w| e_j e_i^T)^{-1} by a rank-one update of X.
Matrix modified_abs_resolvent(const Matrix& X, Edge edge, double w);

struct BoundsReport {
  MetricId metric = MetricId::trace();
  Edge edge;
  double w = 0.0;
  double unmodified_bound = 0.0;
  double modified_bound = 0.0;
  XConstants constants;
  /// Log-det only: sigma for the unmodified bound (from tr W_A) and for the
  /// modified one (from tau).
  std::optional<double> sigma;
  std::optional<double> sigma_modified;
  std::optional<double> tau;
  /// tr(B B^T) / (1 - lambda_1(A A^T)), present when lambda_1(A A^T) < 1.
  std::optional<double> literature_bound;
};

/// Upper bounds on tr(W) before and after adding w to edge i -> j.
BoundsReport trace_bounds(const NetworkSystem& sys, Edge edge, double w);
/// Lower bounds on tr(W^{-1}).
BoundsReport trinv_lower_bounds(const NetworkSystem& sys, Edge edge, double w);
/// Upper bounds on log det(W); sigma of the unmodified bound uses tr(W_A) at horizon T.
BoundsReport logdet_upper_bounds(const NetworkSystem& sys, Edge edge, double w, int T);

std::optional<double> literature_trace_bound(const NetworkSystem& sys);

/// Open interval of weight changes on one edge that keep A stable.
struct WeightInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool bounded = true;

  bool contains(double w) const { return !bounded || (w > lower && w < upper); }
};

WeightInterval stability_weight_interval(const NetworkSystem& sys, Edge edge);

/// 1 / max_{i != j} X(i, j); nullopt when X has no off-diagonal mass.
struct GlobalWeightBound {
  std::optional<double> w_max;
  Edge governing_edge;
};

GlobalWeightBound global_weight_bound(const NetworkSystem& sys);

struct EqualWeightAnalysis {
  /// nullopt = unbounded (a = 0).
  std::optional<double> bud_w_bound;
  double trace_bound = 0.0;
  int bud_length = 0;
};

/// Equal-weight stem-bud network with input at node 1 (y is the 1-based junction).
EqualWeightAnalysis stembud_equal_weight_analysis(double a, int n, int y);

struct RankOneEigenBound {
  double bound = 0.0;
  int rank = 2;
};

/// Upper bound on lambda_1(v e_i^T + e_i v^T); i is 0-based.
RankOneEigenBound lambda1_rank_one_bound(const Vector& v, Index i);

struct PsdNormBounds {
  double lower = 0.0;
  double upper = 0.0;
  double frobenius_sq = 0.0;
};

/// tr(Z)^2/n <= ||Z||_F^2 <= lambda_tilde tr(Z).
PsdNormBounds psd_norm_bounds(const Matrix& Z, double lambda_tilde);

}  // namespace ecm
