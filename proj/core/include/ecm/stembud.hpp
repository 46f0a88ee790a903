#pragma once

#include "ecm/system.hpp"

#include <optional>
#include <vector>

namespace ecm {

/// Directed stem-bud network on nodes 1..n (1-based labels throughout this
/// header). The stem is the line 1 -> 2 -> ... -> y, the bud the cycle
/// y -> y+1 -> ... -> n -> y. Junction y = 0 encodes the pure line.
struct StemBudSpec {
  int n = 0;
  int y = 0;
  /// a_{i,i-1} for i = 2..n, size n-1.
  std::vector<double> stem_weights;
  /// a_{y,n}; ignored when y = 0.
  double back_weight = 0.0;

  /// Throws InvalidJunction / ZeroWeight / DimensionMismatch.
  void validate() const;

  /// n - y + 1, or nullopt for the line (infinite bud).
  std::optional<int> bud_length() const;
  /// a_yn * prod_{j=y+1}^{n} a_{j,j-1}; zero for the line.
  double bud_contribution() const;

  double stem_weight(int to_node) const { return stem_weights.at(static_cast<std::size_t>(to_node - 2)); }

  static StemBudSpec equal_weights(int n, int y, double a);
};

/// Inputs are 1-based node labels. With `require_controllable` the input set
/// must contain node 1.
NetworkSystem build_stembud(const StemBudSpec& spec, std::span<const int> input_nodes,
                            bool require_controllable = false);

/// Diagonal of the Gramian for a single input at node `input_node`, from the
/// closed-form single-hop propagation along stem and bud.
Vector stembud_gramian_closed_form(const StemBudSpec& spec, int input_node, int T);

struct DiagonalPattern {
  int k_sub = 0;
  int k_sup = 0;
  std::vector<int> sub;  // ascending
  std::vector<int> sup;  // ascending
};

/// Possible non-zero sub/super-diagonals of the ECM of an n-node stem-bud
/// network with bud length `bud_length` (nullopt = line).
DiagonalPattern predicted_ecm_diagonals(int n, std::optional<int> bud_length);

}  // namespace ecm
