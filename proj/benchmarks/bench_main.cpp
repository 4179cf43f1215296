#include "activesub/bounds.hpp"
#include "activesub/builtins.hpp"
#include "activesub/random_matrices.hpp"
#include "activesub/sampling.hpp"
#include "activesub/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace activesub;

static void BM_JacobiEig(benchmark::State& state) {
  Rng rng(1);
  const SymmetricMatrix a = random_symmetric(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(a));
}
BENCHMARK(BM_JacobiEig)->RangeMultiplier(2)->Range(4, 64);

static void BM_DrawAndEstimate(benchmark::State& state) {
  const SampledFunction f = builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector4d(2.0, 1.0, 0.5, 0.25)));
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(draw_batch(f, n, ++seed), *f.analytic_E()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawAndEstimate)->Arg(50)->Arg(169)->Arg(2000);

static void BM_PaddedDraw(benchmark::State& state) {
  const SampledFunction f = pad_inactive(
      builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector4d(2.0, 1.0, 0.5, 0.25))),
      static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(draw_batch(f, 169, ++seed));
}
BENCHMARK(BM_PaddedDraw)->Arg(4)->Arg(16)->Arg(64);

static void BM_Certificates(benchmark::State& state) {
  ProblemParams p;
  p.lipschitz_L = 2.0;
  p.norm_E = 1.0;
  p.intdim_E = 3.5;
  p.delta = 0.05;
  p.epsilon = 0.2;
  for (auto _ : state) {
    ProblemParams q = p;
    q.samples = required_samples(p);
    benchmark::DoNotOptimize(relative_error_bound(q));
    benchmark::DoNotOptimize(expectation_markov_bound(q));
  }
}
BENCHMARK(BM_Certificates);
BENCHMARK_MAIN();
