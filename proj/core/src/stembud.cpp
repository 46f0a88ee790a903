#include "ecm/stembud.hpp"

#include "ecm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ecm {

void StemBudSpec::validate() const {
  if (n < 2) fail(ErrorCode::InvalidArgument, "stem-bud network needs n >= 2");
  if (y < 0 || y > n - 1)
    fail(ErrorCode::InvalidJunction,
         "junction y=" + std::to_string(y) + " outside 0.." + std::to_string(n - 1));
  if (stem_weights.size() != static_cast<std::size_t>(n - 1))
    fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(n - 1) + " stem weights");
  for (std::size_t k = 0; k < stem_weights.size(); ++k) {
    if (!std::isfinite(stem_weights[k])) fail(ErrorCode::NonFinite, "stem weight not finite");
    if (stem_weights[k] == 0.0)
      fail(ErrorCode::ZeroWeight, "stem weight a_{" + std::to_string(k + 2) + "," +
                                      std::to_string(k + 1) + "} is zero");
  }
  if (y >= 1) {
    if (!std::isfinite(back_weight)) fail(ErrorCode::NonFinite, "back weight not finite");
    if (back_weight == 0.0) fail(ErrorCode::ZeroWeight, "back-edge weight a_yn is zero");
  }
}

std::optional<int> StemBudSpec::bud_length() const {
  if (y == 0) return std::nullopt;
  return n - y + 1;
}

double StemBudSpec::bud_contribution() const {
  if (y == 0) return 0.0;
  double lambda = back_weight;
  for (int j = y + 1; j <= n; ++j) lambda *= stem_weight(j);
  return lambda;
}

StemBudSpec StemBudSpec::equal_weights(int n, int y, double a) {
  StemBudSpec s;
  s.n = n;
  s.y = y;
  s.stem_weights.assign(static_cast<std::size_t>(std::max(n - 1, 0)), a);
  s.back_weight = y >= 1 ? a : 0.0;
  return s;
}

NetworkSystem build_stembud(const StemBudSpec& spec, std::span<const int> input_nodes,
                            bool require_controllable) {
  spec.validate();
  if (input_nodes.empty()) fail(ErrorCode::InvalidInput, "no input nodes");
  const Index n = spec.n;
  Matrix A = Matrix::Zero(n, n);
  for (int i = 2; i <= spec.n; ++i) A(i - 1, i - 2) = spec.stem_weight(i);
  if (spec.y >= 1) A(spec.y - 1, n - 1) = spec.back_weight;

  std::vector<Index> nodes;
  bool has_first = false;
  for (int node : input_nodes) {
    if (node < 1 || node > spec.n)
      fail(ErrorCode::InvalidInput, "input node " + std::to_string(node) + " outside 1..n");
    has_first = has_first || node == 1;
    nodes.push_back(node - 1);
  }
  if (require_controllable && !has_first)
    fail(ErrorCode::InvalidInput, "node 1 must be actuated for controllability");
  return build_system(std::move(A), canonical_inputs(n, nodes));
}

Vector stembud_gramian_closed_form(const StemBudSpec& spec, int input_node, int T) {
  spec.validate();
  if (input_node < 1 || input_node > spec.n)
    fail(ErrorCode::InvalidInput, "input node " + std::to_string(input_node) + " outside 1..n");
  if (T < 1) fail(ErrorCode::InvalidArgument, "finite horizon needs T >= 1");

  const int n = spec.n;
  const int ib = input_node;
  Vector diag = Vector::Zero(n);

  // Products along the stem from the input node: reach[p] = prod_{j=ib+1}^{p} a_{j,j-1}.
  auto path_product = [&](int from, int to) {
    double prod = 1.0;
    for (int j = from + 1; j <= to; ++j) prod *= spec.stem_weight(j);
    return prod;
  };

  const int first_pass = n - ib + 1;  // steps until node n is reached (inclusive)
  const double to_end = path_product(ib, n);
  for (int t = 1; t <= T; ++t) {
    int p = 0;
    double v = 0.0;
    if (t <= first_pass) {
      p = ib + t - 1;
      v = path_product(ib, p);
    } else {
      if (spec.y == 0) break;  // line: the signal has left the network
      const int lb = *spec.bud_length();
      const int r = t - (n - ib + 2);
      const int xi = r / lb;
      const int zeta = r % lb;
      p = spec.y + zeta;
      v = spec.back_weight * std::pow(spec.bud_contribution(), xi) * to_end;
      if (zeta > 0) v *= path_product(spec.y, p);
    }
    diag(p - 1) += v * v;
  }
  return diag;
}

DiagonalPattern predicted_ecm_diagonals(int n, std::optional<int> bud_length) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "pattern needs n >= 2");
  DiagonalPattern pat;
  if (!bud_length) {
    pat.sub = {1};
    return pat;
  }
  const int lb = *bud_length;
  if (lb < 2) fail(ErrorCode::InvalidArgument, "bud length must be >= 2");
  pat.k_sub = (n - 2) / lb;
  pat.k_sup = n / lb;
  for (int i = 0; i <= pat.k_sub; ++i) pat.sub.push_back(1 + i * lb);
  for (int i = 1; i <= pat.k_sup; ++i) pat.sup.push_back(i * lb - 1);
  return pat;
}

}  // namespace ecm
