#include <random>

#include <benchmark/benchmark.h>

#include "maba/chain.hpp"
#include "maba/overlaps.hpp"
#include "maba/solver.hpp"
#include "maba/states.hpp"

using namespace maba;

namespace {

ChainParams chain_of(std::size_t n) {
  ChainParams p;
  p.sites = n;
  p.c = cplx(1.0, 0.2);
  p.inhomogeneities.clear();
  std::mt19937_64 rng(n);
  std::normal_distribution<double> d(0.0, 0.3);
  for (std::size_t k = 0; k < n; ++k) p.inhomogeneities.emplace_back(d(rng), d(rng));
  return p;
}

const TwistParams twist{cplx(1.3, 0.4), cplx(-0.6, 0.9), cplx(0.7, -0.2), cplx(0.5, 0.8)};

void BM_monodromy(benchmark::State& state) {
  const auto chain = chain_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_monodromy(chain));
}
BENCHMARK(BM_monodromy)->DenseRange(2, 6, 2);

void BM_transfer_eigenpairs(benchmark::State& state) {
  const auto t = build_transfer(chain_of(static_cast<std::size_t>(state.range(0))), twist);
  const CMatrix m = t(cplx(0.3, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(eigenpairs(m));
}
BENCHMARK(BM_transfer_eigenpairs)->DenseRange(2, 6, 2);

void BM_newton(benchmark::State& state) {
  const auto ctx = SpectralContext::make(chain_of(static_cast<std::size_t>(state.range(0))), twist);
  for (auto _ : state) benchmark::DoNotOptimize(solve_newton(ctx));
}
BENCHMARK(BM_newton)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_slavnov(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ctx = SpectralContext::make(chain_of(n), twist);
  const auto sols = solve_newton(ctx);
  std::vector<cplx> v;
  for (std::size_t k = 0; k < n; ++k) v.emplace_back(0.7 + 0.3 * static_cast<double>(k), -0.4);
  const VariableSet off(v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slavnov_formula(ctx, sols.front().roots, off, Orientation::u_onshell));
  }
}
BENCHMARK(BM_slavnov)->DenseRange(1, 3);

void BM_scalar_direct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ctx = SpectralContext::make(chain_of(n), twist);
  const auto ops = ChainOperators::build(ctx);
  std::vector<cplx> u, v;
  for (std::size_t k = 0; k < n; ++k) {
    u.emplace_back(-0.5 + 0.4 * static_cast<double>(k), 0.2);
    v.emplace_back(0.7 + 0.3 * static_cast<double>(k), -0.4);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(scalar_direct(build_dual_vector(ops.nu, VariableSet(u)),
                                           build_bethe_vector(ops.nu, VariableSet(v))));
  }
}
BENCHMARK(BM_scalar_direct)->DenseRange(1, 3);

}  // namespace

BENCHMARK_MAIN();
