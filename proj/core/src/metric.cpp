#include "ecm/metric.hpp"

#include "ecm/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace ecm {

MetricId MetricId::lambda_i(int i) {
  if (i < 1) fail(ErrorCode::InvalidArgument, "eigenvalue index is 1-based");
  return MetricId(Kind::LambdaI, i);
}

int MetricId::eigen_index(Index n) const {
  if (kind_ == Kind::LambdaMin) return static_cast<int>(n);
  if (kind_ != Kind::LambdaI) fail(ErrorCode::InvalidArgument, "metric has no eigen index");
  if (index_ > n)
    fail(ErrorCode::InvalidArgument,
         "eigenvalue index " + std::to_string(index_) + " exceeds n=" + std::to_string(n));
  return index_;
}

std::string MetricId::name() const {
  switch (kind_) {
    case Kind::Trace: return "trace";
    case Kind::LogDet: return "logdet";
    case Kind::NegTraceInv: return "trinv";
    case Kind::LambdaMin: return "lambda-min";
    case Kind::LambdaI: return "lambda-" + std::to_string(index_);
  }
  return "?";
}

MetricId MetricId::parse(const std::string& text) {
  if (text == "trace") return trace();
  if (text == "logdet" || text == "log-det") return log_det();
  if (text == "trinv" || text == "neg-trace-inv") return neg_trace_inv();
  if (text == "lambda-min") return lambda_min();
  if (text.rfind("lambda-", 0) == 0) {
    try {
      return lambda_i(std::stoi(text.substr(7)));
    } catch (const std::logic_error&) {
    }
  }
  fail(ErrorCode::ParseError, "unknown metric '" + text + "'");
}

void require_invertible(const Matrix& W) {
  const Index n = W.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
  const double tr = W.trace();
  const double min_eig = es.eigenvalues()(0);
  if (!(min_eig > 1e-12 * tr / static_cast<double>(n)))
    fail(ErrorCode::SingularGramian, "Gramian is numerically singular (min eigenvalue " +
                                         std::to_string(min_eig) + ", trace " +
                                         std::to_string(tr) + ")");
}

SortedEigen sorted_eigen(const Matrix& W) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(W);
  const Index n = W.rows();
  SortedEigen out{Vector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

double evaluate_metric(const Matrix& W, MetricId metric) {
  using K = MetricId::Kind;
  switch (metric.kind()) {
    case K::Trace:
      return W.trace();
    case K::LogDet: {
      require_invertible(W);
      Eigen::LLT<Matrix> llt(W);
      if (llt.info() != Eigen::Success)
        fail(ErrorCode::SingularGramian, "Cholesky factorization failed");
      return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    }
    case K::NegTraceInv: {
      require_invertible(W);
      Eigen::LLT<Matrix> llt(W);
      if (llt.info() != Eigen::Success)
        fail(ErrorCode::SingularGramian, "Cholesky factorization failed");
      const Matrix inv = llt.solve(Matrix::Identity(W.rows(), W.cols()));
      return -inv.trace();
    }
    case K::LambdaI:
    case K::LambdaMin: {
      const int i = metric.eigen_index(W.rows());
      Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
      return es.eigenvalues()(W.rows() - i);
    }
  }
  return 0.0;
}

double control_energy(const Matrix& W, const Vector& x_final) {
  if (x_final.size() != W.rows())
    fail(ErrorCode::DimensionMismatch, "target state has wrong dimension");
  require_invertible(W);
  Eigen::LLT<Matrix> llt(W);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::SingularGramian, "Cholesky factorization failed");
  return x_final.dot(llt.solve(x_final));
}

}  // namespace ecm
