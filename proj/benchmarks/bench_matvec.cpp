#include <benchmark/benchmark.h>

#include "tbcont/tbsim.hpp"

using namespace tbcont;

namespace {

SparseHamiltonian bilayer(int L, SupercellIndex& cell) {
  cell = SupercellIndex(honeycomb_geometry(1.0), L, L, 2, CellKind::rectangular);
  return assemble_bilayer(cell, 0.01, 0.25, 0.121, MassProfile::circle(L));
}

void BM_Matvec(benchmark::State& st) {
  SupercellIndex cell(honeycomb_geometry(1.0), 1, 1, 2, CellKind::rectangular);
  const SparseHamiltonian H = bilayer(int(st.range(0)), cell);
  CVec x = CVec::Ones(Eigen::Index(H.dim())), y(x.size());
  for (auto _ : st) {
    H.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(H.nnz()));
  st.counters["sites"] = double(H.dim());
}
BENCHMARK(BM_Matvec)->Arg(16)->Arg(64)->Arg(160)->Unit(benchmark::kMicrosecond);

void BM_Rk4Step(benchmark::State& st) {
  SupercellIndex cell(honeycomb_geometry(1.0), 1, 1, 2, CellKind::rectangular);
  const SparseHamiltonian H = bilayer(int(st.range(0)), cell);
  const CVec psi = CVec::Ones(Eigen::Index(H.dim())).normalized();
  for (auto _ : st) benchmark::DoNotOptimize(rk4_propagate(H, psi, 0.125, 1.0, {{}, false, {}}).steps);
  st.counters["sites"] = double(H.dim());
}
BENCHMARK(BM_Rk4Step)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
