#pragma once

#include <Eigen/Dense>

#include <compare>
#include <span>

namespace ecm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Directed edge from node `from` to node `to` (0-based). Its weight lives in
/// the adjacency entry A(to, from).
struct Edge {
  Index from = 0;
  Index to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Linear network dynamics x(t+1) = A x(t) + B u(t).
///
/// Immutable once built; edits return a new system.
class NetworkSystem {
 public:
  /// Validates shapes and finiteness. Throws DimensionMismatch / NonFinite.
  static NetworkSystem build(Matrix A, Matrix B);

  Index n() const noexcept { return A_.rows(); }
  Index m() const noexcept { return B_.cols(); }
  const Matrix& A() const noexcept { return A_; }
  const Matrix& B() const noexcept { return B_; }

  double weight(Edge e) const;

  /// Copy with the weight of `e` replaced by `w` (only entry (to, from) changes).
  NetworkSystem with_edge_weight(Edge e, double w) const;

  /// Copy keeping A and the listed columns of B.
  NetworkSystem with_inputs(std::span<const Index> columns) const;

 private:
  NetworkSystem(Matrix A, Matrix B) : A_(std::move(A)), B_(std::move(B)) {}

  Matrix A_;
  Matrix B_;
};

inline NetworkSystem build_system(Matrix A, Matrix B) {
  return NetworkSystem::build(std::move(A), std::move(B));
}

void check_edge(Index n, Edge e);

/// Unit input matrix whose columns are e_k for the given (0-based) nodes.
Matrix canonical_inputs(Index n, std::span<const Index> nodes);

}  // namespace ecm
