#include <benchmark/benchmark.h>

#include "tbcont/config.hpp"
#include "tbcont/continuum.hpp"

using namespace tbcont;

namespace {

PolySymbol h1(int p) {
  const RunConfig cfg = RunConfig::from_json(
      {{"model", {{"delta", 0.1}, {"omega", 0.5}, {"gamma", 0.25}, {"mass", {{"kind", "circle"}, {"w", 30.0}}}}}});
  return build_effective(cfg, honeycomb_geometry(1.0), p);
}

void BM_WeylApply(benchmark::State& st) {
  const int K = int(st.range(0));
  const PolySymbol b = h1(2);
  SpectralField phi(4, K, K, 6.0, 6.0);
  phi(0, 1, 0) = 1.0;
  phi(3, 0, -2) = 0.5;
  for (auto _ : st) benchmark::DoNotOptimize(weyl_apply(b, phi).norm());
}
BENCHMARK(BM_WeylApply)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BlanesStep(benchmark::State& st) {
  const int K = int(st.range(0));
  const SplitOperator op(h1(1), K, K, 6.0, 6.0);
  SpectralField phi(4, K, K, 6.0, 6.0);
  phi(0, 0, 0) = 1.0;
  for (auto _ : st) {
    blanes_step(op, phi, 0.01);
    benchmark::DoNotOptimize(phi.norm());
  }
}
BENCHMARK(BM_BlanesStep)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
