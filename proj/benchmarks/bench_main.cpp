#include <benchmark/benchmark.h>

#include "vdwtoda/gas.hpp"
#include "vdwtoda/toda.hpp"
#include "vdwtoda/transforms.hpp"

namespace {

using namespace vdwtoda;

const GasParameters kGas{.a = 2.0, .b = 1.0};

void BM_Energy(benchmark::State& state) {
  ExtensiveState s{0.3, 2.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(s);
    benchmark::DoNotOptimize(energy(kGas, s));
  }
}
BENCHMARK(BM_Energy);

void BM_ContactLift(benchmark::State& state) {
  ExtensiveState s{0.3, 2.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(s);
    benchmark::DoNotOptimize(contact_lift(kGas, s));
  }
}
BENCHMARK(BM_ContactLift);

void BM_FullChain(benchmark::State& state) {
  double S = 0.3;
  double V = 2.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(S);
    benchmark::DoNotOptimize(V);
    benchmark::DoNotOptimize(full_chain(kGas, S, V));
  }
}
BENCHMARK(BM_FullChain);

void BM_VerletStep(benchmark::State& state) {
  TodaParams p;
  p.n_sites = static_cast<int>(state.range(0));
  TodaState s = sample_thermal(p, 0.01, 1.0, 1);
  for (auto _ : state) {
    s = step_verlet(s, p);
    benchmark::DoNotOptimize(s.q.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerletStep)->Arg(8)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
