#include "ecm/er.hpp"

#include "ecm/error.hpp"
#include "ecm/gramian.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace ecm {

void ErConfig::validate() const {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
  if (m < 1 || m > n) fail(ErrorCode::InvalidArgument, "m must lie in 1..n");
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1]");
  if (!(rho_lo > 0.0 && rho_lo < rho_hi && rho_hi < 1.0))
    fail(ErrorCode::InvalidArgument, "rho interval must satisfy 0 < lo < hi < 1");
  if (weight_law != "uniform01") fail(ErrorCode::InvalidArgument, "unknown weight law " + weight_law);
  if (count < 0) fail(ErrorCode::InvalidArgument, "count must be non-negative");
}

NetworkSystem generate_er_system(const ErConfig& cfg, std::uint64_t index) {
  cfg.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> target(cfg.rho_lo, cfg.rho_hi);

  const Index n = cfg.n;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix A = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j && unit(rng) < cfg.p) A(j, i) = unit(rng);
    const double rho = spectral_radius(A);
    const double goal = target(rng);
    if (!(rho > 0.0)) continue;
    A *= goal / rho;

    std::vector<Index> nodes(static_cast<std::size_t>(n));
    std::iota(nodes.begin(), nodes.end(), Index{0});
    std::shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(static_cast<std::size_t>(cfg.m));
    std::sort(nodes.begin(), nodes.end());
    return build_system(std::move(A), canonical_inputs(n, nodes));
  }
  fail(ErrorCode::DegenerateGraph, "no graph with a cycle after 100 attempts");
}

}  // namespace ecm
