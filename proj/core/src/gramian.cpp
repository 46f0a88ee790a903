#include "ecm/gramian.hpp"

#include "ecm/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ecm {

Horizon Horizon::finite(int steps) {
  if (steps < 1) fail(ErrorCode::InvalidArgument, "finite horizon needs T >= 1");
  return Horizon(steps);
}

int Horizon::steps() const {
  if (!steps_) fail(ErrorCode::InvalidArgument, "infinite horizon has no step count");
  return *steps_;
}

namespace {

double symmetrize(Matrix& W) {
  const double asym = (W - W.transpose()).norm();
  W = 0.5 * (W + W.transpose());
  return asym;
}

double smallest_eigenvalue(const Matrix& W) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Tarjan's algorithm, iterative. Edge j -> i exists when A(i, j) != 0.
std::vector<std::vector<Index>> strongly_connected_components(const Matrix& A) {
  const Index n = A.rows();
  std::vector<Index> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> comps;
  Index counter = 0;

  struct Frame {
    Index v;
    Index next;
  };
  std::vector<Frame> call;

  for (Index root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const Index v = f.v;
      bool descended = false;
      while (f.next < n) {
        const Index w = f.next++;
        if (A(w, v) == 0.0) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        std::vector<Index> comp;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        comps.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const Index parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return comps;
}

}  // namespace

Matrix gramian_matrix(const Matrix& A, const Matrix& B, int T) {
  if (T < 1) fail(ErrorCode::InvalidArgument, "finite horizon needs T >= 1");
  const Index n = A.rows();
  Matrix W = Matrix::Zero(n, n);
  Matrix G = B;
  Matrix next(n, B.cols());
  for (int t = 0; t < T; ++t) {
    W.selfadjointView<Eigen::Lower>().rankUpdate(G);
    if (t + 1 < T) {
      next.noalias() = A * G;
      G.swap(next);
    }
  }
  W.triangularView<Eigen::StrictlyUpper>() = W.transpose();
  return W;
}

GramianResult finite_gramian(const NetworkSystem& sys, int T) {
  if (T < 1) fail(ErrorCode::InvalidArgument, "finite horizon needs T >= 1");
  const Index n = sys.n();
  GramianResult r;
  r.horizon = Horizon::finite(T);
  r.W = Matrix::Zero(n, n);
  Matrix G = sys.B();
  for (int t = 0; t < T; ++t) {
    r.W.noalias() += G * G.transpose();
    if (t + 1 < T) G = sys.A() * G;
  }
  r.asymmetry = symmetrize(r.W);
  r.symmetrized = true;
  r.min_eig = smallest_eigenvalue(r.W);
  return r;
}

Matrix solve_stein(const Matrix& A, const Matrix& Q, const SteinOptions& opts) {
  Matrix W = Q;
  Matrix Ak = A;
  for (int k = 0; k < opts.max_doublings; ++k) {
    Matrix increment = Ak * W * Ak.transpose();
    W += increment;
    const double inc = increment.norm();
    const double total = W.norm();
    if (inc <= opts.rel_tol * total || (inc == 0.0 && total == 0.0)) return W;
    Ak = Ak * Ak;
  }
  fail(ErrorCode::UnstableSystem, "Smith doubling did not converge in " +
                                      std::to_string(opts.max_doublings) + " doublings");
}

GramianResult infinite_gramian(const NetworkSystem& sys) {
  const StabilityInfo info = stability_info(sys.A());
  if (info.rho >= 1.0 - 1e-12)
    fail(ErrorCode::UnstableSystem,
         "infinite-horizon Gramian needs rho(A) < 1, got " + std::to_string(info.rho));
  const Matrix Q = sys.B() * sys.B().transpose();
  GramianResult r;
  r.horizon = Horizon::infinite();
  r.W = solve_stein(sys.A(), Q);
  r.asymmetry = symmetrize(r.W);
  r.symmetrized = true;
  r.residual = (sys.A() * r.W * sys.A().transpose() - r.W + Q).norm();
  r.min_eig = smallest_eigenvalue(r.W);
  return r;
}

StabilityInfo stability_info(const Matrix& A) {
  if (A.rows() != A.cols()) fail(ErrorCode::DimensionMismatch, "A must be square");
  double rho = 0.0;
  for (const auto& comp : strongly_connected_components(A)) {
    if (comp.size() == 1) {
      rho = std::max(rho, std::abs(A(comp[0], comp[0])));
      continue;
    }
    const Index k = static_cast<Index>(comp.size());
    Matrix block(k, k);
    for (Index r = 0; r < k; ++r)
      for (Index c = 0; c < k; ++c) block(r, c) = A(comp[r], comp[c]);
    Eigen::EigenSolver<Matrix> es(block, false);
    rho = std::max(rho, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return {rho, rho < 1.0};
}

}  // namespace ecm
