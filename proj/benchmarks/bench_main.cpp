// Microbenchmarks for the solver-heavy paths: exact transport, curvature
// sweeps, heat-operator assembly, and the constant optimizer. Run manually
// (not part of ctest); regressions here are performance, not correctness.

#include <benchmark/benchmark.h>

#include <vector>

#include "mctk/chain.hpp"
#include "mctk/curvature.hpp"
#include "mctk/functional.hpp"
#include "mctk/rng.hpp"
#include "mctk/transport.hpp"
#include "mctk/verify.hpp"

namespace {

using mctk::chain_zoo;
using mctk::FiniteChain;

std::vector<double> random_law(mctk::Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = rng.gamma(0.8);
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

void BM_OptimalTransportCycle(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FiniteChain chain = chain_zoo("cycle", n, 0.5);
  mctk::Rng rng(42);
  const auto mu = random_law(rng, n);
  const auto nu = random_law(rng, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(mctk::optimal_transport(mu, nu, chain.metric()).value);
}
BENCHMARK(BM_OptimalTransportCycle)->Arg(8)->Arg(32)->Arg(64)->Arg(128);

void BM_CoarseRicci(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FiniteChain chain = chain_zoo("complete", n, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(mctk::coarse_ricci(chain).kappa);
}
BENCHMARK(BM_CoarseRicci)->Arg(8)->Arg(16)->Arg(32);

void BM_CoarseRicciHypercube(benchmark::State& state) {
  const FiniteChain chain =
      chain_zoo("hypercube", static_cast<std::size_t>(state.range(0)), 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(mctk::coarse_ricci(chain).kappa);
}
BENCHMARK(BM_CoarseRicciHypercube)->Arg(3)->Arg(4)->Arg(5);

void BM_HeatOperator(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FiniteChain chain = chain_zoo("cycle", n, 0.5);
  for (auto _ : state) {
    mctk::HeatOperator op(chain, 2.0);
    benchmark::DoNotOptimize(op.matrix()(0, 0));
  }
}
BENCHMARK(BM_HeatOperator)->Arg(16)->Arg(64)->Arg(128);

void BM_MlsiOptimizerRestart(benchmark::State& state) {
  const FiniteChain chain =
      chain_zoo("complete", static_cast<std::size_t>(state.range(0)), 0.5);
  mctk::SobolevOptions options;
  options.restarts = 1;
  options.seed = 7;
  for (auto _ : state)
    benchmark::DoNotOptimize(mctk::mlsi_constant(chain, options).value);
}
BENCHMARK(BM_MlsiOptimizerRestart)->Arg(4)->Arg(16)->Arg(64);

void BM_T1Scan(benchmark::State& state) {
  const FiniteChain chain =
      chain_zoo("hypercube", static_cast<std::size_t>(state.range(0)), 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(mctk::t1_scan(chain, 50, 3).worst_ratio);
}
BENCHMARK(BM_T1Scan)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
