#include "ecm/system.hpp"

#include "ecm/error.hpp"

#include <cmath>
#include <string>

namespace ecm {

NetworkSystem NetworkSystem::build(Matrix A, Matrix B) {
  if (A.rows() == 0 || A.rows() != A.cols())
    fail(ErrorCode::DimensionMismatch,
         "A must be square and non-empty, got " + std::to_string(A.rows()) + "x" +
             std::to_string(A.cols()));
  if (B.rows() != A.rows())
    fail(ErrorCode::DimensionMismatch, "B has " + std::to_string(B.rows()) +
                                           " rows but A is " + std::to_string(A.rows()) +
                                           "x" + std::to_string(A.cols()));
  if (B.cols() < 1 || B.cols() > A.rows())
    fail(ErrorCode::DimensionMismatch,
         "input count must satisfy 1 <= m <= n, got m=" + std::to_string(B.cols()));
  if (!A.allFinite() || !B.allFinite())
    fail(ErrorCode::NonFinite, "system matrices contain NaN or Inf");
  return NetworkSystem(std::move(A), std::move(B));
}

void check_edge(Index n, Edge e) {
  if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
    fail(ErrorCode::IndexOutOfRange, "edge (" + std::to_string(e.from) + "->" +
                                         std::to_string(e.to) + ") outside 0.." +
                                         std::to_string(n - 1));
}

double NetworkSystem::weight(Edge e) const {
  check_edge(n(), e);
  return A_(e.to, e.from);
}

NetworkSystem NetworkSystem::with_edge_weight(Edge e, double w) const {
  check_edge(n(), e);
  if (!std::isfinite(w)) fail(ErrorCode::NonFinite, "edge weight is not finite");
  Matrix A = A_;
  A(e.to, e.from) = w;
  return NetworkSystem(std::move(A), B_);
}

NetworkSystem NetworkSystem::with_inputs(std::span<const Index> columns) const {
  if (columns.empty()) fail(ErrorCode::InvalidInput, "empty input subset");
  Matrix B(n(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Index k = columns[c];
    if (k < 0 || k >= m())
      fail(ErrorCode::InvalidInput, "input index " + std::to_string(k) + " out of range");
    B.col(static_cast<Index>(c)) = B_.col(k);
  }
  return NetworkSystem(A_, std::move(B));
}

Matrix canonical_inputs(Index n, std::span<const Index> nodes) {
  Matrix B = Matrix::Zero(n, static_cast<Index>(nodes.size()));
  for (std::size_t c = 0; c < nodes.size(); ++c) {
    if (nodes[c] < 0 || nodes[c] >= n)
      fail(ErrorCode::InvalidInput, "input node " + std::to_string(nodes[c]) + " out of range");
    B(nodes[c], static_cast<Index>(c)) = 1.0;
  }
  return B;
}

}  // namespace ecm
