#include "ecm/er.hpp"
#include "ecm/gradient.hpp"
#include "ecm/gramian.hpp"
#include "ecm/search.hpp"

#include <benchmark/benchmark.h>

namespace {

ecm::NetworkSystem er_system(int n) {
  ecm::ErConfig cfg;
  cfg.n = n;
  cfg.m = std::max(1, n / 4);
  cfg.rho_lo = 0.6;
  cfg.rho_hi = 0.65;
  return ecm::generate_er_system(cfg, 0);
}

void BM_FiniteGramian(benchmark::State& state) {
  const auto sys = er_system(static_cast<int>(state.range(0)));
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ecm::gramian_matrix(sys.A(), sys.B(), T));
}
BENCHMARK(BM_FiniteGramian)->Arg(10)->Arg(30)->Arg(100);

void BM_InfiniteGramian(benchmark::State& state) {
  const auto sys = er_system(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ecm::infinite_gramian(sys));
}
BENCHMARK(BM_InfiniteGramian)->Arg(10)->Arg(30)->Arg(100);

void BM_Theta(benchmark::State& state) {
  const auto sys = er_system(static_cast<int>(state.range(0)));
  const int T = static_cast<int>(state.range(0));
  const ecm::Matrix P = ecm::Matrix::Identity(sys.n(), sys.n());
  for (auto _ : state) benchmark::DoNotOptimize(ecm::theta_matrix(sys, T, P));
}
BENCHMARK(BM_Theta)->Arg(10)->Arg(30)->Arg(100);

// Literal double sum over (s, t) with explicit powers, for comparison.
void BM_ThetaLiteral(benchmark::State& state) {
  const auto sys = er_system(static_cast<int>(state.range(0)));
  const int T = static_cast<int>(state.range(0));
  const ecm::Index n = sys.n();
  for (auto _ : state) {
    std::vector<ecm::Matrix> pw(static_cast<std::size_t>(T), ecm::Matrix::Identity(n, n));
    for (int t = 1; t < T; ++t) pw[static_cast<std::size_t>(t)] = sys.A() * pw[static_cast<std::size_t>(t - 1)];
    const ecm::Matrix BB = sys.B() * sys.B().transpose();
    ecm::Matrix theta = ecm::Matrix::Zero(n, n);
    for (int t = 1; t < T; ++t)
      for (int s = 0; s < t; ++s)
        theta += pw[static_cast<std::size_t>(t - 1 - s)].transpose() * pw[static_cast<std::size_t>(t)] * BB *
                 pw[static_cast<std::size_t>(s)].transpose();
    benchmark::DoNotOptimize(theta);
  }
}
BENCHMARK(BM_ThetaLiteral)->Arg(10)->Arg(30);

void BM_ExhaustiveSearch(benchmark::State& state) {
  const auto sys = er_system(static_cast<int>(state.range(0)));
  ecm::SearchOptions opts;
  opts.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(ecm::exhaustive_search(sys, sys.n(), ecm::MetricId::trace(), 1.0, opts));
}
BENCHMARK(BM_ExhaustiveSearch)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
