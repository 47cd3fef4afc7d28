// Microbenchmarks for the hot paths: pointwise model factors, grid
// construction, the decomposition backends and the fitting loop. Grid sizes
// stay at or below 512 so a full run finishes in well under a minute; the
// production 4096 numbers scale from these (grid build is O(n^2), the gram
// eigensolve O(n^3)).
#include <complex>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "cavityspdc/prng.hh"
#include "cavityspdc/scenario_io.hh"
#include "cavityspdc/schmidt.hh"
#include "cavityspdc/spectral.hh"
#include "cavityspdc/temporal.hh"
#include "cavityspdc/units.hh"

using namespace spdc;

namespace {

const Scenario& device() {
  static const Scenario sc =
      load_scenario(std::string(SCENARIO_DIR) + "/paper_device_smoke.scn");
  return sc;
}

Scenario device_n(int n) {
  Scenario sc = device();
  sc.grid.n_s = sc.grid.n_i = n;
  sc.grid.relaxed_guard = true;
  return sc;
}

void bm_airy(benchmark::State& state) {
  const Scenario& sc = device();
  const double w0 = sc.grid.center_s;
  double w = w0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(airy(sc.cavity, sc.crystal, Field::signal, w));
    w += 1e6;
    if (w > w0 + 1e11) w = w0;
  }
}
BENCHMARK(bm_airy);

void bm_mismatch(benchmark::State& state) {
  const Scenario& sc = device();
  const double ws = sc.grid.center_s, wi = sc.grid.center_i;
  double d = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavevector_mismatch(sc.crystal, ws + d, wi - d));
    d += 1e6;
    if (d > 1e11) d = 0.0;
  }
}
BENCHMARK(bm_mismatch);

void bm_build_jsa(benchmark::State& state) {
  Scenario sc = device_n(int(state.range(0)));
  for (auto _ : state) {
    JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
    benchmark::DoNotOptimize(jsa.amp.data());
  }
}
BENCHMARK(bm_build_jsa)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void bm_schmidt(benchmark::State& state) {
  Scenario sc = device_n(int(state.range(0)));
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
  for (auto _ : state) {
    SchmidtResult r = schmidt_decompose(jsa);
    benchmark::DoNotOptimize(r.schmidt_K);
  }
}
BENCHMARK(bm_schmidt)->Arg(128)->Arg(256)->Arg(512)
    ->Unit(benchmark::kMillisecond);

void bm_fit_xcorr(benchmark::State& state) {
  SplitMix64 rng(1);
  Histogram h;
  for (int b = 0; b < 241; ++b) {
    const double t = -12e-9 + 24e-9 * b / 240.0;
    const double mu =
        cross_correlation_model(167.9e6, 180.4e6, 1e4, 100.0, 0.0, t);
    h.centers.push_back(t);
    h.counts.push_back(double(poisson(rng, mu)));
  }
  for (auto _ : state) {
    FitReport r = fit_cross_correlation(h);
    benchmark::DoNotOptimize(r.rss);
  }
}
BENCHMARK(bm_fit_xcorr)->Unit(benchmark::kMillisecond);

void bm_poisson(benchmark::State& state) {
  SplitMix64 rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(poisson(rng, 1e4));
}
BENCHMARK(bm_poisson);

}  // namespace

BENCHMARK_MAIN();
