#include "ecm/curve_fit.hpp"

#include "ecm/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ecm {

namespace {

double horner(const Vector& c, double x) {
  double acc = 0.0;
  for (Index k = c.size() - 1; k >= 0; --k) acc = acc * x + c(k);
  return acc;
}

int count_distinct(std::span<const double> h) {
  std::vector<double> s(h.begin(), h.end());
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

}  // namespace

double RationalFit::numerator(double h) const { return horner(p, (h - center) / scale); }
double RationalFit::denominator(double h) const { return horner(q, (h - center) / scale); }

std::vector<double> RationalFit::poles() const {
  const Index deg = q.size() - 1;
  std::vector<double> out;
  if (deg < 1) return out;
  Matrix companion = Matrix::Zero(deg, deg);
  for (Index k = 1; k < deg; ++k) companion(k, k - 1) = 1.0;
  for (Index k = 0; k < deg; ++k) companion(k, deg - 1) = -q(k);
  Eigen::EigenSolver<Matrix> es(companion, false);
  for (Index k = 0; k < deg; ++k) {
    const auto z = es.eigenvalues()(k);
    if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z.real())))
      out.push_back(center + scale * z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RationalFit fit_rational(std::span<const double> h, std::span<const double> f, int degree) {
  if (h.size() != f.size()) fail(ErrorCode::DimensionMismatch, "h and f differ in length");
  if (degree < 0) fail(ErrorCode::InvalidArgument, "negative degree");
  if (h.empty()) fail(ErrorCode::FitDegenerate, "no data");
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  RationalFit fit;
  fit.center = 0.5 * (*lo + *hi);
  fit.scale = 0.5 * (*hi - *lo);
  if (!(fit.scale > 0.0)) fail(ErrorCode::FitDegenerate, "all abscissae coincide");

  const Index rows = static_cast<Index>(h.size());
  const Index d = degree;
  Matrix M(rows, 2 * d + 1);
  Vector rhs(rows);
  for (Index r = 0; r < rows; ++r) {
    const double x = (h[r] - fit.center) / fit.scale;
    double xk = 1.0;
    for (Index k = 0; k <= d; ++k) {
      M(r, k) = xk;
      if (k < d) M(r, d + 1 + k) = -f[r] * xk;
      xk *= x;
    }
    rhs(r) = f[r] * std::pow(x, static_cast<double>(d));
  }
  const Vector sol = M.completeOrthogonalDecomposition().solve(rhs);
  fit.p = sol.head(d + 1);
  fit.q = Vector::Ones(d + 1);
  fit.q.head(d) = sol.tail(d);
  return fit;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) fail(ErrorCode::DimensionMismatch, "knots and values differ in length");
  if (n < 2) fail(ErrorCode::FitDegenerate, "interpolation needs two knots");
  for (std::size_t k = 1; k < n; ++k)
    if (!(x_[k] > x_[k - 1])) fail(ErrorCode::InvalidArgument, "knots must increase strictly");

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    delta[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] > 0.0) {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) return 0.0;
    if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3.0 * m0)) return 3.0 * m0;
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double Pchip::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] +
         (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * d_[k + 1];
}

void monotone_envelope(std::span<const double> h, std::span<const double> f,
                       std::vector<double>& hx, std::vector<double>& fy) {
  if (h.size() != f.size()) fail(ErrorCode::DimensionMismatch, "h and f differ in length");
  std::vector<std::size_t> order(h.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return h[a] < h[b]; });
  hx.clear();
  fy.clear();
  for (std::size_t idx : order) {
    if (!hx.empty() && h[idx] == hx.back()) {
      fy.back() = std::max(fy.back(), f[idx]);
    } else {
      hx.push_back(h[idx]);
      fy.push_back(f[idx]);
    }
  }
  for (std::size_t k = 1; k < fy.size(); ++k) fy[k] = std::max(fy[k], fy[k - 1]);
}

CurveEstimate estimate_curve(std::span<const double> h, std::span<const double> f, double h_eval,
                             const CurveFitOptions& opts) {
  if (h.size() != f.size()) fail(ErrorCode::DimensionMismatch, "h and f differ in length");
  for (std::size_t k = 0; k < h.size(); ++k)
    if (!std::isfinite(h[k]) || !std::isfinite(f[k]))
      fail(ErrorCode::NonFinite, "fit data must be finite");
  if (!std::isfinite(h_eval)) fail(ErrorCode::NonFinite, "evaluation point not finite");

  CurveEstimate out;
  auto& diag = out.diagnostics;
  diag.distinct_points = count_distinct(h);
  if (diag.distinct_points < opts.min_distinct)
    fail(ErrorCode::FitDegenerate, "only " + std::to_string(diag.distinct_points) +
                                       " distinct abscissae");

  const RationalFit fit = fit_rational(h, f, opts.degree);
  const double lo = std::min(*std::min_element(h.begin(), h.end()), h_eval);
  const double hi = std::max(*std::max_element(h.begin(), h.end()), h_eval);

  for (double pole : fit.poles())
    if (pole >= lo && pole <= hi) diag.pole_in_range = true;

  double prev = 0.0, max_abs = 0.0;
  std::vector<double> values(static_cast<std::size_t>(opts.grid_points));
  for (int g = 0; g < opts.grid_points; ++g) {
    const double x = lo + (hi - lo) * g / (opts.grid_points - 1);
    const double qx = fit.denominator(x);
    if (qx == 0.0 || !std::isfinite(qx)) diag.pole_in_range = true;
    values[static_cast<std::size_t>(g)] = fit(x);
    max_abs = std::max(max_abs, std::abs(values[static_cast<std::size_t>(g)]));
  }
  for (int g = 0; g < opts.grid_points; ++g) {
    const double v = values[static_cast<std::size_t>(g)];
    if (!std::isfinite(v)) diag.monotone = false;
    if (g > 0 && v < prev - 1e-9 * max_abs) diag.monotone = false;
    prev = v;
  }

  if (!diag.pole_in_range && diag.monotone) {
    diag.model = "rational";
    double r2 = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) r2 += std::pow(f[k] - fit(h[k]), 2);
    diag.residual_norm = std::sqrt(r2);
    out.value = fit(h_eval);
    return out;
  }

  std::vector<double> hx, fy;
  monotone_envelope(h, f, hx, fy);
  const Pchip interp(hx, fy);
  diag.model = "pchip-envelope";
  diag.fallback_used = true;
  double r2 = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) r2 += std::pow(f[k] - interp(h[k]), 2);
  diag.residual_norm = std::sqrt(r2);
  out.value = interp(h_eval);
  return out;
}

}  // namespace ecm
