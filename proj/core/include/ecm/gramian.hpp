#pragma once

#include "ecm/system.hpp"

#include <optional>

namespace ecm {

/// Time horizon: a positive step count or the infinite horizon.
class Horizon {
 public:
  static Horizon finite(int steps);
  static Horizon infinite() { return Horizon(); }

  bool is_finite() const noexcept { return steps_.has_value(); }
  /// Throws InvalidArgument for the infinite horizon.
  int steps() const;

  friend bool operator==(const Horizon&, const Horizon&) = default;

 private:
  Horizon() = default;
  explicit Horizon(int steps) : steps_(steps) {}
  std::optional<int> steps_;
};

struct GramianResult {
  Matrix W;
  Horizon horizon = Horizon::infinite();
  double min_eig = 0.0;
  bool symmetrized = false;
  /// ||W - W^T||_F before symmetrization.
  double asymmetry = 0.0;
  /// ||A W A^T - W + B B^T||_F; only meaningful for the infinite horizon.
  double residual = 0.0;
};

/// W = sum_{t=0}^{T-1} A^t B B^T (A^t)^T via G_{t+1} = A G_t, G_0 = B.
GramianResult finite_gramian(const NetworkSystem& sys, int T);

/// Bare accumulation used on hot paths: no eigenvalue pass, symmetrized.
Matrix gramian_matrix(const Matrix& A, const Matrix& B, int T);

/// Solution of A W A^T - W + B B^T = 0. Throws UnstableSystem when
/// rho(A) >= 1 - 1e-12.
GramianResult infinite_gramian(const NetworkSystem& sys);

struct SteinOptions {
  double rel_tol = 1e-12;
  int max_doublings = 100;
};

/// Squared Smith doubling for X = sum_t A^t Q (A^t)^T. The caller is
/// responsible for rho(A) < 1.
Matrix solve_stein(const Matrix& A, const Matrix& Q, const SteinOptions& opts = {});

struct StabilityInfo {
  double rho = 0.0;
  bool stable = true;
};

/// Spectral radius, evaluated block-wise on the strongly connected components
/// of the sparsity graph of A.
StabilityInfo stability_info(const Matrix& A);

inline double spectral_radius(const Matrix& A) { return stability_info(A).rho; }

}  // namespace ecm
