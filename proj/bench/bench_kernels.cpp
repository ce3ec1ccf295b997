#include <benchmark/benchmark.h>

#include "mocktrace/kernels.hpp"
#include "mocktrace/series.hpp"

using namespace mocktrace;

namespace {
ExecMode mode_of(const benchmark::State& st) { return st.range(0) ? ExecMode::parallel : ExecMode::serial; }

void BM_gm_node_sums(benchmark::State& st) {
  CosetTable t = build_coset_table(st.range(1));
  PhiEval phi(1, 1.5);
  std::vector<cplx> taus, out;
  for (int k = 0; k < 15; ++k) taus.emplace_back(0.01 * k, 0.5 + 0.05 * k);
  for (auto _ : st) {
    gm_node_sums(t, phi, {}, taus, out, mode_of(st));
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(t.size() * taus.size()));
}
BENCHMARK(BM_gm_node_sums)->ArgsProduct({{0, 1}, {300, 1500}})->Unit(benchmark::kMillisecond);

void BM_annulus_sum(benchmark::State& st) {
  PhiIntegral Phi(1, 1.5);
  for (auto _ : st) benchmark::DoNotOptimize(annulus_sum(QuadForm{0, 1, 0}, 1, Phi, st.range(1), 2 * st.range(1), mode_of(st)));
}
BENCHMARK(BM_annulus_sum)->ArgsProduct({{0, 1}, {300, 1500}})->Unit(benchmark::kMillisecond);

void BM_kloosterman_table(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kloosterman_plus_table(1, 1, st.range(1), mode_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(1));
}
BENCHMARK(BM_kloosterman_table)->ArgsProduct({{0, 1}, {20000, 200000}})->Unit(benchmark::kMillisecond);

void BM_kloosterman_direct(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kloosterman_plus_table(5, 0, st.range(1), mode_of(st)));
}
BENCHMARK(BM_kloosterman_direct)->ArgsProduct({{0, 1}, {500}})->Unit(benchmark::kMillisecond);
}  // namespace
BENCHMARK_MAIN();
