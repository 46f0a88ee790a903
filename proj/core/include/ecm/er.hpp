#pragma once

#include "ecm/system.hpp"

#include <cstdint>
#include <string>

namespace ecm {

struct ErConfig {
  int n = 30;
  int m = 8;
  double p = 0.35;
  double rho_lo = 0.85;
  double rho_hi = 0.90;
  /// Only "uniform01" is supported.
  std::string weight_law = "uniform01";
  int count = 100;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument.
  void validate() const;
};

/// Network `index` of the ensemble described by `cfg`. Each network has its
/// own generator seeded from (cfg.seed, index), so any member can be
/// regenerated on its own.
NetworkSystem generate_er_system(const ErConfig& cfg, std::uint64_t index = 0);

}  // namespace ecm
