// Microbenchmarks for the forward-model hot path: Bessel evaluation, the
// radial window integral, the plate reflection coefficient, one full
// inductance evaluation, and the characteristic-frequency search.

#include <benchmark/benchmark.h>

#include <complex>

#include "eddyspec/bessel.hpp"
#include "eddyspec/compensation.hpp"
#include "eddyspec/forward.hpp"
#include "eddyspec/spectrum.hpp"

namespace es = eddyspec;

namespace {
const es::CoilPair kCoil{0.0118, 0.012, 0.003, 0.001, 0.0005, 20};
const es::Plate kPlate{38.2e6, 22e-6, 1.0};
}  // namespace

static void BM_BesselJ1(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(es::bessel_j1(x));
        x += 1e-3;
        if (x > 3000.0) x = 0.1;
    }
}
BENCHMARK(BM_BesselJ1);

static void BM_CoilWindow(benchmark::State& state) {
    const double alpha = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(es::coil_window_p(alpha, kCoil.r1, kCoil.r2));
}
BENCHMARK(BM_CoilWindow)->Arg(100)->Arg(2000)->Arg(100000);

static void BM_PlatePhi(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(es::plate_phi(118.0, 2.4e5, kPlate));
}
BENCHMARK(BM_PlatePhi);

static void BM_DeltaL(benchmark::State& state) {
    const es::QuadratureSettings settings;
    const es::detail::ForwardKernel kernel(kCoil, 0.0, settings, es::GeometryForm::product);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel.delta_l(2.4e5, kPlate));
}
BENCHMARK(BM_DeltaL);

static void BM_Alpha0Search(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(es::characteristic_alpha0(kCoil, 0.0));
}
BENCHMARK(BM_Alpha0Search);

static void BM_SimulateSpectrum(benchmark::State& state) {
    const es::FrequencyGrid grid{1e3, 1e6, 15};
    const es::QuadratureSettings settings;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            es::simulate_spectrum(grid, kCoil, kPlate, 0.0, settings));
}
BENCHMARK(BM_SimulateSpectrum)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
