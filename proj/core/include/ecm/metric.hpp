#pragma once

#include "ecm/gramian.hpp"

#include <string>

namespace ecm {

/// Gramian-based performance metric. Eigenvalues are ordered descending, so
/// LambdaI(1) is the largest and LambdaMin is LambdaI(n).
class MetricId {
 public:
  enum class Kind { Trace, LogDet, NegTraceInv, LambdaI, LambdaMin };

  static MetricId trace() { return MetricId(Kind::Trace, 0); }
  static MetricId log_det() { return MetricId(Kind::LogDet, 0); }
  static MetricId neg_trace_inv() { return MetricId(Kind::NegTraceInv, 0); }
  static MetricId lambda_min() { return MetricId(Kind::LambdaMin, 0); }
  /// 1-based eigenvalue rank.
  static MetricId lambda_i(int i);

  Kind kind() const noexcept { return kind_; }
  /// 1-based eigenvalue index for LambdaI; n for LambdaMin.
  int eigen_index(Index n) const;
  bool needs_inverse() const noexcept {
    return kind_ == Kind::LogDet || kind_ == Kind::NegTraceInv;
  }

  std::string name() const;
  /// Accepts trace | logdet | trinv | lambda-min | lambda-<i>.
  static MetricId parse(const std::string& text);

  friend bool operator==(const MetricId&, const MetricId&) = default;

 private:
  MetricId(Kind k, int i) : kind_(k), index_(i) {}
  Kind kind_;
  int index_;
};

/// Throws SingularGramian when min_eig <= 1e-12 * tr(W) / n.
void require_invertible(const Matrix& W);

double evaluate_metric(const Matrix& W, MetricId metric);
inline double evaluate_metric(const GramianResult& g, MetricId metric) {
  return evaluate_metric(g.W, metric);
}

/// x^T W^{-1} x through a Cholesky solve.
double control_energy(const Matrix& W, const Vector& x_final);
inline double control_energy(const GramianResult& g, const Vector& x_final) {
  return control_energy(g.W, x_final);
}

/// Symmetric eigen-decomposition with eigenvalues sorted descending.
struct SortedEigen {
  Vector values;
  Matrix vectors;
};
SortedEigen sorted_eigen(const Matrix& W);

}  // namespace ecm
