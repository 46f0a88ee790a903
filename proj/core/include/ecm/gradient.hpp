#pragma once

#include "ecm/metric.hpp"

#include <vector>

namespace ecm {

/// Edge centrality matrices Theta_P^k (one per input column) and their sum.
/// Entry (j, i) is half the derivative of tr(P W) with respect to a_ji.
struct ThetaResult {
  std::vector<Matrix> per_input;
  Matrix total;
  Matrix P_used;
  int T = 1;
};

ThetaResult theta_matrix(const NetworkSystem& sys, int T, const Matrix& P);

/// Weight matrix P for which 2 Theta_P is the gradient of `metric`:
/// I, W^{-1}, W^{-2} or v_i v_i^T.
Matrix metric_weight_matrix(const Matrix& W, MetricId metric);

/// Smallest relative gap min_{j != i} |lambda_i - lambda_j| / lambda_1.
double relative_eigen_gap(const Vector& descending_values, int i);

struct GradientMatrix {
  Matrix G;  // G(j, i) = df / da_ji
  MetricId metric = MetricId::trace();
  int T = 1;
};

GradientMatrix metric_gradient(const NetworkSystem& sys, int T, MetricId metric);

/// Central differences with a single absolute step in [1e-9, 1e-3].
GradientMatrix fd_gradient_oracle(const NetworkSystem& sys, int T, MetricId metric,
                                  double step);

/// Central differences with the per-entry step 1e-6 * (1 + |a_ji|).
GradientMatrix fd_gradient_oracle(const NetworkSystem& sys, int T, MetricId metric);

/// dW_inf / da_ji from the differentiated Lyapunov equation
/// A X A^T - X + E W A^T + A W E^T = 0 with E = e_j e_i^T.
Matrix lyapunov_gradient(const NetworkSystem& sys, Edge edge);

}  // namespace ecm
