#include "ecm/gradient.hpp"

#include "ecm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecm {

namespace {

void check_symmetric(const Matrix& P, Index n) {
  if (P.rows() != n || P.cols() != n)
    fail(ErrorCode::DimensionMismatch, "P must be n x n");
  if (!P.allFinite()) fail(ErrorCode::NonFinite, "P contains NaN or Inf");
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    fail(ErrorCode::AsymmetricP, "weight matrix P is not symmetric");
}

}  // namespace

ThetaResult theta_matrix(const NetworkSystem& sys, int T, const Matrix& P) {
  if (T < 1) fail(ErrorCode::InvalidArgument, "finite horizon needs T >= 1");
  const Index n = sys.n();
  check_symmetric(P, n);

  ThetaResult out;
  out.T = T;
  out.P_used = P;
  out.total = Matrix::Zero(n, n);
  out.per_input.assign(static_cast<std::size_t>(sys.m()), Matrix::Zero(n, n));
  if (T == 1) return out;

  const Matrix& A = sys.A();
  // prefix[j] = sum_{u<=j} (A^u)^T P A^u, j = 0..T-2
  std::vector<Matrix> prefix;
  prefix.reserve(static_cast<std::size_t>(T - 1));
  Matrix K = P;
  prefix.push_back(K);
  for (int u = 1; u <= T - 2; ++u) {
    K = (A.transpose() * K * A).eval();
    prefix.push_back(prefix.back() + K);
  }

  for (Index k = 0; k < sys.m(); ++k) {
    Matrix& theta = out.per_input[static_cast<std::size_t>(k)];
    Vector g = sys.B().col(k);
    Vector g_next(n);
    for (int s = 0; s <= T - 2; ++s) {
      g_next.noalias() = A * g;
      theta.noalias() += (prefix[static_cast<std::size_t>(T - 2 - s)] * g_next) * g.transpose();
      g.swap(g_next);
    }
    out.total += theta;
  }
  return out;
}

double relative_eigen_gap(const Vector& values, int i) {
  const Index idx = i - 1;
  double gap = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < values.size(); ++j)
    if (j != idx) gap = std::min(gap, std::abs(values(idx) - values(j)));
  const double scale = std::abs(values(0));
  if (scale == 0.0) return 0.0;
  return gap / scale;
}

Matrix metric_weight_matrix(const Matrix& W, MetricId metric) {
  using K = MetricId::Kind;
  const Index n = W.rows();
  switch (metric.kind()) {
    case K::Trace:
      return Matrix::Identity(n, n);
    case K::LogDet:
    case K::NegTraceInv: {
      require_invertible(W);
      const SortedEigen se = sorted_eigen(W);
      const int power = metric.kind() == K::LogDet ? 1 : 2;
      const Vector scale = se.values.array().pow(-power).matrix();
      Matrix P = se.vectors * scale.asDiagonal() * se.vectors.transpose();
      return 0.5 * (P + P.transpose());
    }
    case K::LambdaI:
    case K::LambdaMin: {
      const int i = metric.eigen_index(n);
      const SortedEigen se = sorted_eigen(W);
      if (n > 1 && relative_eigen_gap(se.values, i) < 1e-8)
        fail(ErrorCode::RepeatedEigenvalue,
             "eigenvalue " + std::to_string(i) + " is not simple; its gradient is undefined");
      const Vector v = se.vectors.col(i - 1);
      return v * v.transpose();
    }
  }
  return Matrix::Identity(n, n);
}

GradientMatrix metric_gradient(const NetworkSystem& sys, int T, MetricId metric) {
  const Matrix W = gramian_matrix(sys.A(), sys.B(), T);
  const Matrix P = metric_weight_matrix(W, metric);
  GradientMatrix out;
  out.G = 2.0 * theta_matrix(sys, T, P).total;
  out.metric = metric;
  out.T = T;
  return out;
}

namespace {

template <typename StepFn>
GradientMatrix central_differences(const NetworkSystem& sys, int T, MetricId metric,
                                   StepFn step_for) {
  const Index n = sys.n();
  GradientMatrix out;
  out.G = Matrix::Zero(n, n);
  out.metric = metric;
  out.T = T;
  Matrix A = sys.A();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double a = A(j, i);
      const double h = step_for(a);
      A(j, i) = a + h;
      const double f_plus = evaluate_metric(gramian_matrix(A, sys.B(), T), metric);
      A(j, i) = a - h;
      const double f_minus = evaluate_metric(gramian_matrix(A, sys.B(), T), metric);
      A(j, i) = a;
      out.G(j, i) = (f_plus - f_minus) / (2.0 * h);
    }
  }
  return out;
}

}  // namespace

GradientMatrix fd_gradient_oracle(const NetworkSystem& sys, int T, MetricId metric,
                                  double step) {
  if (!(step >= 1e-9 && step <= 1e-3))
    fail(ErrorCode::InvalidArgument, "finite-difference step must lie in [1e-9, 1e-3]");
  return central_differences(sys, T, metric, [step](double) { return step; });
}

GradientMatrix fd_gradient_oracle(const NetworkSystem& sys, int T, MetricId metric) {
  return central_differences(sys, T, metric,
                             [](double a) { return 1e-6 * (1.0 + std::abs(a)); });
}

Matrix lyapunov_gradient(const NetworkSystem& sys, Edge edge) {
  check_edge(sys.n(), edge);
  const GramianResult w_inf = infinite_gramian(sys);
  const Matrix& A = sys.A();
  // E W A^T has a single non-zero row (edge.to) equal to row edge.from of W A^T.
  const Matrix WAt = w_inf.W * A.transpose();
  Matrix Q = Matrix::Zero(sys.n(), sys.n());
  Q.row(edge.to) = WAt.row(edge.from);
  Q += Q.transpose().eval();
  Matrix X = solve_stein(A, Q);
  return 0.5 * (X + X.transpose());
}

}  // namespace ecm
