#pragma once

#include "ecm/system.hpp"

#include <string>
#include <vector>

namespace ecm {

/// p(x) / q(x) in the normalized variable x = (h - center) / scale, with q monic.
struct RationalFit {
  Vector p;  // ascending coefficients, size degree + 1
  Vector q;  // ascending coefficients, q(degree) == 1
  double center = 0.0;
  double scale = 1.0;

  double numerator(double h) const;
  double denominator(double h) const;
  double operator()(double h) const { return numerator(h) / denominator(h); }
  /// Real roots of q mapped back to h.
  std::vector<double> poles() const;
};

/// Linearized least squares: f q(x) = p(x), solved with a complete
/// orthogonal decomposition (minimum-norm when underdetermined).
RationalFit fit_rational(std::span<const double> h, std::span<const double> f, int degree);

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Outside the knots the end values are held.
class Pchip {
 public:
  /// Knots must be strictly increasing; at least two.
  Pchip(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  const std::vector<double>& knots() const { return x_; }

 private:
  std::vector<double> x_, y_, d_;
};

/// Sorted distinct abscissae with the running maximum of f (max over
/// duplicates first), i.e. the nondecreasing upper envelope of the data.
void monotone_envelope(std::span<const double> h, std::span<const double> f,
                       std::vector<double>& hx, std::vector<double>& fy);

struct FitDiagnostics {
  std::string model;  // "rational" or "pchip-envelope"
  bool fallback_used = false;
  double residual_norm = 0.0;
  int distinct_points = 0;
  bool pole_in_range = false;
  bool monotone = true;
};

struct CurveEstimate {
  double value = 0.0;
  FitDiagnostics diagnostics;
};

struct CurveFitOptions {
  int degree = 3;
  int min_distinct = 6;
  int grid_points = 2000;
};

/// Fits f as a function of h and evaluates the fit at h_eval. The rational
/// model is used when it is pole-free and nondecreasing on
/// [min h, max(max h, h_eval)]; otherwise the envelope interpolant is used.
/// Throws FitDegenerate below `min_distinct` distinct h values.
CurveEstimate estimate_curve(std::span<const double> h, std::span<const double> f, double h_eval,
                             const CurveFitOptions& opts = {});

}  // namespace ecm
