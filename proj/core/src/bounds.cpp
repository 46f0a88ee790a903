#include "ecm/bounds.hpp"

#include "ecm/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <string>
#include <vector>

namespace ecm {

namespace {

// reach(i, j) = true when node i is reachable from node j (including i == j).
std::vector<std::vector<char>> reachability(const Matrix& A) {
  const Index n = A.rows();
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<Index> queue;
  for (Index src = 0; src < n; ++src) {
    queue.assign(1, src);
    reach[src][src] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Index v = queue[head];
      for (Index w = 0; w < n; ++w) {
        if (A(w, v) != 0.0 && !reach[w][src]) {
          reach[w][src] = 1;
          queue.push_back(w);
        }
      }
    }
  }
  return reach;
}

void require_abs_stable(const Matrix& absA, const std::string& what) {
  // Margin keeps roundoff on rho = 1 exactly (e.g. permutation matrices) from passing.
  const double rho = spectral_radius(absA);
  if (!(rho < 1.0 - 1e-12))
    fail(ErrorCode::UnstableAbsSystem, what + " has rho = " + std::to_string(rho) + " >= 1");
}

void check_off_diagonal(Index n, Edge edge) {
  check_edge(n, edge);
  if (edge.from == edge.to)
    fail(ErrorCode::InvalidArgument, "bounds apply to edges i -> j with i != j");
}

struct Preconditions {
  XConstants constants;
};

Preconditions modification_preconditions(const NetworkSystem& sys, Edge edge, double w) {
  check_off_diagonal(sys.n(), edge);
  const Matrix absA = sys.A().cwiseAbs();
  if (!(spectral_radius(absA) < 1.0))
    fail(ErrorCode::PreconditionViolated, "rho(|A|) >= 1");
  Matrix modified = absA;
  modified(edge.to, edge.from) += std::abs(w);
  if (!(spectral_radius(modified) < 1.0))
    fail(ErrorCode::PreconditionViolated, "rho(|A| + |w| e_j e_i^T) >= 1");
  return {x_constants(sys, w)};
}

double tau_of(const XConstants& c) {
  return (1.0 + c.alpha * c.beta) * c.trace_hx + c.alpha * c.alpha * c.gamma * c.gamma_bar;
}

double logdet_bound(double trace_value, double n, double sigma) {
  return sigma * n * std::log(trace_value / std::pow(n, 1.0 / sigma));
}

}  // namespace

Matrix abs_resolvent(const Matrix& A) {
  const Index n = A.rows();
  const Matrix absA = A.cwiseAbs();
  require_abs_stable(absA, "|A|");
  Matrix X = (Matrix::Identity(n, n) - absA).partialPivLu().solve(Matrix::Identity(n, n));
  const auto reach = reachability(absA);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!reach[i][j]) X(i, j) = 0.0;
  return X;
}

XConstants x_constants(const NetworkSystem& sys, double w) {
  const Index n = sys.n();
  XConstants c;
  c.w = w;
  c.X = abs_resolvent(sys.A());
  const Matrix& X = c.X;

  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && X(i, j) > c.max_off_diagonal) {
        c.max_off_diagonal = X(i, j);
        c.argmax_row = i;
        c.argmax_col = j;
      }

  const double aw = std::abs(w);
  const double denom = 1.0 - aw * c.max_off_diagonal;
  if (!(denom > 0.0))
    fail(ErrorCode::AlphaUndefined, "1 - |w| max X(i,j) = " + std::to_string(denom) + " <= 0");
  c.alpha = aw / denom;

  const double max_col_norm = X.colwise().norm().maxCoeff();
  c.beta = std::max(2.0 * c.max_off_diagonal, c.max_off_diagonal + max_col_norm);
  c.gamma = X.colwise().squaredNorm().maxCoeff();
  const Matrix XB = X * sys.B().cwiseAbs();
  c.gamma_bar = XB.rowwise().squaredNorm().maxCoeff();
  c.trace_hx = XB.squaredNorm();
  return c;
}

double alpha_for_edge(const Matrix& X, Edge edge, double w) {
  const double aw = std::abs(w);
  const double denom = 1.0 - aw * X(edge.from, edge.to);
  if (!(denom > 0.0)) fail(ErrorCode::AlphaUndefined, "1 - |w| X(i,j) <= 0 for this edge");
  return aw / denom;
}

Matrix modified_abs_resolvent(const Matrix& X, Edge edge, double w) {
  const double a = alpha_for_edge(X, edge, w);
  return X + a * X.col(edge.to) * X.row(edge.from);
}

std::optional<double> literature_trace_bound(const NetworkSystem& sys) {
  const Matrix AAt = sys.A() * sys.A().transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(AAt, Eigen::EigenvaluesOnly);
  const double lambda1 = es.eigenvalues().maxCoeff();
  if (!(lambda1 < 1.0)) return std::nullopt;
  return sys.B().squaredNorm() / (1.0 - lambda1);
}

BoundsReport trace_bounds(const NetworkSystem& sys, Edge edge, double w) {
  BoundsReport r;
  r.metric = MetricId::trace();
  r.edge = edge;
  r.w = w;
  r.constants = modification_preconditions(sys, edge, w).constants;
  r.unmodified_bound = r.constants.trace_hx;
  r.tau = tau_of(r.constants);
  r.modified_bound = *r.tau;
  r.literature_bound = literature_trace_bound(sys);
  return r;
}

BoundsReport trinv_lower_bounds(const NetworkSystem& sys, Edge edge, double w) {
  BoundsReport r;
  r.metric = MetricId::neg_trace_inv();
  r.edge = edge;
  r.w = w;
  r.constants = modification_preconditions(sys, edge, w).constants;
  const double n = static_cast<double>(sys.n());
  r.tau = tau_of(r.constants);
  r.unmodified_bound = n * n / r.constants.trace_hx;
  r.modified_bound = n * n / *r.tau;
  return r;
}

BoundsReport logdet_upper_bounds(const NetworkSystem& sys, Edge edge, double w, int T) {
  BoundsReport r;
  r.metric = MetricId::log_det();
  r.edge = edge;
  r.w = w;
  r.constants = modification_preconditions(sys, edge, w).constants;
  const double n = static_cast<double>(sys.n());
  const double tr_w = gramian_matrix(sys.A(), sys.B(), T).trace();
  r.sigma = tr_w <= 1.0 ? 1.0 : 2.0;
  r.unmodified_bound = logdet_bound(r.constants.trace_hx, n, *r.sigma);
  r.tau = tau_of(r.constants);
  r.sigma_modified = *r.tau <= 1.0 ? 1.0 : 2.0;
  r.modified_bound = logdet_bound(*r.tau, n, *r.sigma_modified);
  return r;
}

WeightInterval stability_weight_interval(const NetworkSystem& sys, Edge edge) {
  check_off_diagonal(sys.n(), edge);
  const Matrix X = abs_resolvent(sys.A());
  const double x = X(edge.from, edge.to);
  if (x == 0.0) return {0.0, 0.0, false};
  return {-1.0 / x, 1.0 / x, true};
}

GlobalWeightBound global_weight_bound(const NetworkSystem& sys) {
  const Matrix X = abs_resolvent(sys.A());
  GlobalWeightBound out;
  double best = 0.0;
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j)
      if (i != j && X(i, j) > best) {
        best = X(i, j);
        out.governing_edge = Edge{i, j};  // modifying i -> j is governed by X(i, j)
      }
  if (best > 0.0) out.w_max = 1.0 / best;
  return out;
}

EqualWeightAnalysis stembud_equal_weight_analysis(double a, int n, int y) {
  if (!(a >= 0.0 && a < 1.0)) fail(ErrorCode::InvalidArgument, "weight a must lie in [0, 1)");
  if (n < 2 || y < 1 || y > n - 1)
    fail(ErrorCode::InvalidJunction, "junction y=" + std::to_string(y) + " outside 1.." +
                                         std::to_string(n - 1));
  EqualWeightAnalysis out;
  out.bud_length = n - y + 1;
  const int lb = out.bud_length;
  const double loop = std::pow(a, lb);
  const double head = std::pow(a, lb - 1);
  if (head > 0.0) out.bud_w_bound = (1.0 - loop) / head;

  double stem = 0.0;
  for (int k = 0; k <= y - 2; ++k) stem += std::pow(a, 2 * k);
  double bud = 0.0;
  for (int k = y - 1; k <= n - 1; ++k) bud += std::pow(a, 2 * k);
  out.trace_bound = stem + bud / ((1.0 - loop) * (1.0 - loop));
  return out;
}

RankOneEigenBound lambda1_rank_one_bound(const Vector& v, Index i) {
  if (i < 0 || i >= v.size()) fail(ErrorCode::IndexOutOfRange, "index outside vector");
  const double norm = v.norm();
  if (norm == 0.0) fail(ErrorCode::ZeroVector, "v must be non-zero");
  Vector orth = v;
  orth(i) = 0.0;
  RankOneEigenBound out;
  if (orth.norm() <= 1e-12 * norm) {
    out.rank = 1;
    // The single non-zero eigenvalue is 2 v_i; the remaining n-1 are zero.
    out.bound = v.size() > 1 ? std::max(2.0 * v(i), 0.0) : 2.0 * v(i);
  } else {
    out.rank = 2;
    out.bound = v(i) + norm;
  }
  return out;
}

PsdNormBounds psd_norm_bounds(const Matrix& Z, double lambda_tilde) {
  if (Z.rows() != Z.cols()) fail(ErrorCode::DimensionMismatch, "Z must be square");
  const double asym = (Z - Z.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, Z.cwiseAbs().maxCoeff()))
    fail(ErrorCode::NotPD, "Z is not symmetric");
  Eigen::LLT<Matrix> llt(Z);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPD, "Z is not positive definite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Z, Eigen::EigenvaluesOnly);
  const double lambda1 = es.eigenvalues().maxCoeff();
  if (lambda_tilde < lambda1 * (1.0 - 1e-12))
    fail(ErrorCode::LambdaTildeTooSmall, "lambda_tilde is below lambda_1(Z)");
  const double tr = Z.trace();
  PsdNormBounds out;
  out.lower = tr * tr / static_cast<double>(Z.rows());
  out.upper = lambda_tilde * tr;
  out.frobenius_sq = Z.squaredNorm();
  return out;
}

}  // namespace ecm
