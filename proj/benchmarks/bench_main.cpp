#include <benchmark/benchmark.h>

#include "nonspread/analytics.hpp"
#include "nonspread/verify.hpp"

using namespace nsp;

namespace {

void BM_BesselKComplexOrder(benchmark::State& state) {
  const cplx nu(0.5, static_cast<double>(state.range(0)));
  const cplx z(3.0, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(bessel_k(nu, z));
}
BENCHMARK(BM_BesselKComplexOrder)->Arg(0)->Arg(10)->Arg(30)->Arg(50);

void BM_FreePacket(benchmark::State& state) {
  const PacketParams pp{30.0, 0.005, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(free_nonspreading(pp, {1.0, 35.0}));
}
BENCHMARK(BM_FreePacket);

void BM_FreeQuadratureOracle(benchmark::State& state) {
  const PacketParams pp{30.0, 0.005, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(free_quadrature(pp, {1.0, 35.0}));
}
BENCHMARK(BM_FreeQuadratureOracle);

void BM_LaserPacket(benchmark::State& state) {
  const PacketParams pp{30.0, 0.005, 0.0};
  const auto f = FieldProfile::linear(1.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(laser_nonspreading(pp, f, {1.0, 35.0}));
}
BENCHMARK(BM_LaserPacket);

void BM_RestFrameSpinor(benchmark::State& state) {
  const PacketParams pp{30.0, 0.005, 0.0};
  const auto f = FieldProfile::linear(1.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(rest_frame_spinor(pp, f, {1.0, 35.0}));
}
BENCHMARK(BM_RestFrameSpinor);

void BM_DensityGrid(benchmark::State& state) {
  GridRequest r;
  r.params = {30.0, 0.005, 0.0};
  r.window = {0.0, 80.0, 0.0, 60.0};
  r.n1 = r.n2 = static_cast<int>(state.range(0));
  r.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(density_grid(r));
  state.SetItemsProcessed(state.iterations() * r.n1 * r.n2);
}
BENCHMARK(BM_DensityGrid)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TransformedResidual(benchmark::State& state) {
  const PacketParams pp{3.0, 0.5, 0.0};
  const auto f = FieldProfile::linear(1.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(residual_transformed(pp, f, {1.3, 2.4}));
}
BENCHMARK(BM_TransformedResidual)->Unit(benchmark::kMillisecond);

void BM_Asymmetry(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(asymmetry({30.0, 1e-6, 0.0}, 1.0));
}
BENCHMARK(BM_Asymmetry)->Unit(benchmark::kMillisecond);

void BM_RindlerWidth(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(variance_u_numeric({40.0, 1e-6, 0.0}, 10.0));
}
BENCHMARK(BM_RindlerWidth)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
