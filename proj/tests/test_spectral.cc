#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "doctest.h"

#include "cavityspdc/spectral.hh"
#include "cavityspdc/units.hh"
#include "device.hh"
#include "frozen.hh"

using namespace spdc;
using testdev::check_abs;
using testdev::check_rel;

namespace {

// sample frequencies with a given sum detuning, split evenly
struct SumDetuned {
  double ws, wi;
  SumDetuned(double omega_p0, double d)
      : ws(omega_p0 / 2 + d / 2), wi(omega_p0 / 2 + d / 2) {}
};

}  // namespace

TEST_CASE("spectral: pump envelope peak and widths") {
  const double w0 = omega_from_wavelength(775e-9);
  const double tau = 1.1e-9;

  PumpSpec g = PumpSpec::gaussian_pulse(w0, tau);
  CHECK_NOTHROW(g.validate());
  check_rel(g.sigma_f, 2.0 * std::sqrt(std::log(2.0)) / tau, 1e-14);
  SumDetuned on(w0, 0.0);
  check_rel(std::abs(pump_envelope(g, on.ws, on.wi)), 1.0, 1e-14);
  // intensity falls to half at a sum detuning of sigma_f sqrt(ln 2); the
  // tolerance allows for rounding the ~1e15 rad/s sum against a ~1e9 rad/s
  // detuning
  SumDetuned half(w0, g.sigma_f * std::sqrt(std::log(2.0)));
  check_rel(std::norm(pump_envelope(g, half.ws, half.wi)), 0.5, 1e-9);

  PumpSpec s = PumpSpec::square_pulse(w0, tau);
  SumDetuned zero(w0, two_pi / tau);  // first sinc null
  check_abs(std::abs(pump_envelope(s, zero.ws, zero.wi)), 0.0, 1e-8);
  check_rel(std::abs(pump_envelope(s, on.ws, on.wi)), 1.0, 1e-14);

  // tampered width is rejected
  g.sigma_f *= 1.01;
  CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("spectral: double pass pump factor") {
  CavitySpec cav = testdev::device().cavity;
  const double L = testdev::device().crystal.length_m;

  cav.r_p = 0.0;
  for (double dk : {-900.0, -10.0, 0.0, 400.0})
    check_rel(double_pass_factor(cav, dk, L), 1.0, 1e-14);

  cav.r_p = 1.0;
  cav.phi_p = 0.0;
  check_rel(double_pass_factor(cav, 0.0, L), 2.0, 1e-14);
  // the retro pass interferes destructively half a grating period out
  check_abs(double_pass_factor(cav, -pi / L, L), 0.0, 1e-7);
  check_abs(double_pass_factor(cav, pi / L, L), 0.0, 1e-7);

  // residual pump phase shifts the null and bounds the factor
  cav.phi_p = 0.6;
  const double expect =
      std::sqrt(2.0 + 2.0 * std::cos(-pi + 0.6));
  check_rel(double_pass_factor(cav, -pi / L, L), expect, 1e-12);
  cav.r_p = 0.35;
  for (double dk : {-700.0, -3.0, 0.0, 150.0, 9000.0}) {
    const double d = double_pass_factor(cav, dk, L);
    CHECK(d >= 1.0 - cav.r_p - 1e-12);
    CHECK(d <= 1.0 + cav.r_p + 1e-12);
  }
}

TEST_CASE("spectral: finesse and linewidths match the device figures") {
  const CavitySpec& cav = testdev::device().cavity;
  const CrystalSpec& c = testdev::device().crystal;
  check_rel(finesse(cav, Field::signal, c.length_m), frozen::finesse, 1e-12);
  check_rel(finesse(cav, Field::idler, c.length_m), frozen::finesse, 1e-12);
  check_rel(linewidth(cav, c, Field::signal), frozen::lw_signal_hz, 1e-11);
  check_rel(linewidth(cav, c, Field::idler), frozen::lw_idler_hz, 1e-11);

  CavitySpec lossless = cav;
  lossless.R1_signal = 1.0;
  lossless.R2_signal = 1.0;
  lossless.alpha = 0.0;
  CHECK_THROWS_AS(finesse(lossless, Field::signal, c.length_m),
                  DegenerateCavity);
  CavitySpec open = cav;
  open.R2_signal = 0.0;
  CHECK(finesse(open, Field::signal, c.length_m) == 0.0);
}

TEST_CASE("spectral: airy comb on and off resonance") {
  const CavitySpec& cav = testdev::device().cavity;
  const CrystalSpec& c = testdev::device().crystal;
  const double w_res =
      resonance_near(cav, c, Field::signal, omega_from_wavelength(1.540e-6));
  check_rel(w_res, frozen::omega_s_center, 5e-13);

  check_rel(airy(cav, c, Field::signal, w_res), 1.0, 1e-9);

  const double fsr_ang = two_pi * frozen::fsr_signal_hz;
  const double f = frozen::finesse;
  // anti-resonance floor
  check_rel(airy(cav, c, Field::signal, w_res + fsr_ang / 2),
            1.0 / (1.0 + 4.0 * f * f / (pi * pi)), 1e-3);
  // half maximum one half linewidth out
  check_rel(airy(cav, c, Field::signal, w_res + pi * frozen::lw_signal_hz),
            0.5, 1e-2);
  // periodicity over one free spectral range
  check_rel(airy(cav, c, Field::signal, w_res + fsr_ang), 1.0, 1e-3);
}

TEST_CASE("spectral: doubly resonant centering") {
  const CavitySpec& cav = testdev::device().cavity;
  const CrystalSpec& c = testdev::device().crystal;
  ResonantCenters rc = center_on_resonances(c, cav);
  check_rel(rc.omega_s, frozen::omega_s_center, 5e-13);
  check_rel(rc.omega_i, frozen::omega_i_center, 5e-13);
  check_rel(rc.omega_p, rc.omega_s + rc.omega_i, 1e-15);

  // the scenario loader stored exactly these centers in the grid
  const FrequencyGrid& g = testdev::device().grid;
  check_rel(g.center_s, rc.omega_s, 1e-14);
  check_rel(g.center_i, rc.omega_i, 1e-14);
  check_rel(testdev::device().pump.omega_p0, rc.omega_p, 1e-14);
}

TEST_CASE("spectral: grid validation and the sampling guard") {
  FrequencyGrid g = testdev::device().grid;
  CHECK_NOTHROW(g.validate());
  g.n_s = 1;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = testdev::device().grid;
  g.span_i = -1.0;
  CHECK_THROWS_AS(g.validate(), DomainError);

  // the bundled 1024 grid only builds because its guard is relaxed
  spdc::Scenario strict = testdev::device();
  CHECK(strict.grid.relaxed_guard);
  strict.grid.relaxed_guard = false;
  CHECK_THROWS_AS(
      build_jsa(strict.crystal, strict.cavity, strict.pump, strict.grid),
      ResolutionTooCoarse);
}

TEST_CASE("spectral: joint amplitude normalization and peak location") {
  spdc::Scenario sc = testdev::device_n(256);
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
  CHECK(jsa.normalized);
  check_rel(jsa.intensity_sum(), 1.0, 1e-9);

  int pj = 0, pk = 0;
  double best = -1.0;
  for (int j = 0; j < sc.grid.n_s; ++j)
    for (int k = 0; k < sc.grid.n_i; ++k)
      if (std::abs(jsa.amp(j, k)) > best) {
        best = std::abs(jsa.amp(j, k));
        pj = j;
        pk = k;
      }
  // the brightest sample sits within one step of the doubly resonant point
  check_abs(sc.grid.omega_s(pj), sc.grid.center_s, 1.01 * sc.grid.step_s());
  check_abs(sc.grid.omega_i(pk), sc.grid.center_i, 1.01 * sc.grid.step_i());
}

TEST_CASE("spectral: retro pump scales the amplitude by the double pass factor") {
  spdc::Scenario with = testdev::device_n(128);
  spdc::Scenario without = with;
  without.cavity.r_p = 0.0;
  JSAGrid a = build_jsa(with.crystal, with.cavity, with.pump, with.grid);
  JSAGrid b =
      build_jsa(without.crystal, without.cavity, without.pump, without.grid);
  // sample along the energy conserving anti-diagonal j + k = n - 1; far off
  // it the pulsed pump amplitude underflows and the ratio is 0/0
  const std::vector<std::pair<int, int>> samples{
      {64, 63}, {10, 117}, {100, 27}, {127, 0}};
  for (auto [j, k] : samples) {
    const double dk = wavevector_mismatch(
        with.crystal, with.grid.omega_s(j), with.grid.omega_i(k));
    const double expect =
        double_pass_factor(with.cavity, dk, with.crystal.length_m);
    const double got = std::abs(a.amp(j, k) / a.norm_scale) /
                       std::abs(b.amp(j, k) / b.norm_scale);
    check_rel(got, expect, 1e-12);
  }
}

TEST_CASE("spectral: amplitude reduces to envelope times phase matching") {
  spdc::Scenario sc = testdev::device_n(96);
  sc.cavity.R1_signal = sc.cavity.R2_signal = 0.0;
  sc.cavity.R1_idler = sc.cavity.R2_idler = 0.0;
  sc.cavity.r_p = 0.0;
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
  const std::vector<std::pair<int, int>> samples{{48, 48}, {5, 80}, {90, 12}};
  for (auto [j, k] : samples) {
    const std::complex<double> raw = jsa.amp(j, k) / jsa.norm_scale;
    const std::complex<double> expect =
        pump_envelope(sc.pump, sc.grid.omega_s(j), sc.grid.omega_i(k)) *
        phase_matching(sc.crystal, sc.grid.omega_s(j), sc.grid.omega_i(k));
    check_abs(std::abs(raw - expect), 0.0, 1e-12 * std::abs(expect) + 1e-15);
  }
}

TEST_CASE("spectral: cw pump confines the state to the energy conserving ridge") {
  spdc::Scenario sc = testdev::device_n(129);
  const double step_sum = sc.grid.step_s() + sc.grid.step_i();
  sc.pump = PumpSpec::cw(sc.pump.omega_p0, 1.5 * step_sum);
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);
  const double measure = sc.grid.step_s() * sc.grid.step_i();
  double off_ridge = 0.0;
  for (int j = 0; j < sc.grid.n_s; ++j)
    for (int k = 0; k < sc.grid.n_i; ++k) {
      const double d =
          sc.grid.omega_s(j) + sc.grid.omega_i(k) - sc.pump.omega_p0;
      if (std::abs(d) > 6.0 * sc.pump.sigma_f)
        off_ridge += std::norm(jsa.amp(j, k)) * measure;
    }
  CHECK(off_ridge < 1e-6);
}

TEST_CASE("spectral: lorentzian filter reweights the idler axis") {
  spdc::Scenario sc = testdev::device_n(256);
  JSAGrid u = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);

  FilterSpec f;
  f.kind = FilterSpec::Kind::lorentzian;
  f.axis = Field::idler;
  f.center = sc.grid.center_i;
  f.fwhm_hz = 5e9;
  JSAGrid v = apply_filter(u, {f});
  CHECK(v.normalized);
  check_rel(v.intensity_sum(), 1.0, 1e-9);

  auto transmission = [&](int k) {
    const double dn = (sc.grid.omega_i(k) - f.center) / two_pi;
    return std::sqrt(1.0 / (1.0 + std::pow(2.0 * dn / f.fwhm_hz, 2)));
  };
  // keep the probe points on the anti-diagonal so the pump amplitude is
  // finite; the ratio of ratios cancels the renormalization constant
  for (int k : {40, 128, 201}) {
    const int j = 255 - k;
    const double got = (std::abs(v.amp(j, k)) / std::abs(u.amp(j, k))) /
                       (std::abs(v.amp(127, 128)) / std::abs(u.amp(127, 128)));
    check_rel(got, transmission(k) / transmission(128), 1e-12);
  }

  // a filter orders of magnitude wider than the grid is a no-op
  FilterSpec broad = f;
  broad.fwhm_hz = 1e15;
  JSAGrid w = apply_filter(u, {broad});
  double worst = 0.0;
  for (int jj = 0; jj < 256; jj += 17)
    for (int kk = 0; kk < 256; kk += 17)
      worst = std::max(worst, std::abs(std::abs(w.amp(jj, kk)) -
                                       std::abs(u.amp(jj, kk))));
  CHECK(worst < 1e-9 * std::abs(u.amp(128, 128)));

  FilterSpec off = f;
  off.center = sc.grid.center_i + 10.0 * sc.grid.span_i;
  CHECK_THROWS_AS(apply_filter(u, {off}), FilterOffGrid);
}

TEST_CASE("spectral: etalon filter comb") {
  spdc::Scenario sc = testdev::device_n(256);
  JSAGrid u = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);

  FilterSpec f;
  f.kind = FilterSpec::Kind::airy;
  f.axis = Field::idler;
  f.center = sc.grid.center_i;
  f.fwhm_hz = 0.5e9;
  f.etalon_fsr_hz = 10e9;
  CHECK_NOTHROW(f.validate());
  JSAGrid v = apply_filter(u, {f});

  const double fc = 1.0 / std::pow(std::sin(pi * f.fwhm_hz /
                                            (2.0 * f.etalon_fsr_hz)),
                                   2);
  auto transmission = [&](int k) {
    const double dn = (sc.grid.omega_i(k) - f.center) / two_pi;
    return std::sqrt(
        1.0 / (1.0 + fc * std::pow(std::sin(pi * dn / f.etalon_fsr_hz), 2)));
  };
  for (int k : {60, 150, 230}) {
    const int j = 255 - k;  // stay on the anti-diagonal, see above
    const double got = (std::abs(v.amp(j, k)) / std::abs(u.amp(j, k))) /
                       (std::abs(v.amp(127, 128)) / std::abs(u.amp(127, 128)));
    check_rel(got, transmission(k) / transmission(128), 1e-9);
  }

  // an etalon needs its comb period above the passband width
  FilterSpec bad = f;
  bad.etalon_fsr_hz = 0.2e9;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("spectral: marginals integrate to one and resolve the comb") {
  spdc::Scenario sc = testdev::device_n(256);
  JSAGrid jsa = build_jsa(sc.crystal, sc.cavity, sc.pump, sc.grid);

  for (Field f : {Field::signal, Field::idler}) {
    Spectrum m = marginal(jsa, f);
    REQUIRE(m.omega.size() == 256);
    const double step = m.omega[1] - m.omega[0];
    double sum = 0.0;
    for (double v : m.value) sum += v * step;
    check_rel(sum, 1.0, 1e-9);
  }

  // with the idler cavity removed the signal marginal is a clean comb, one
  // line per free spectral range
  spdc::Scenario bare = testdev::device_n(256);
  bare.cavity.R1_idler = bare.cavity.R2_idler = 0.0;
  JSAGrid open_jsa = build_jsa(bare.crystal, bare.cavity, bare.pump, bare.grid);
  Spectrum m = marginal(open_jsa, Field::signal);
  const double vmax = *std::max_element(m.value.begin(), m.value.end());
  std::vector<double> peaks;
  for (size_t j = 1; j + 1 < m.value.size(); ++j)
    if (m.value[j] > 0.3 * vmax && m.value[j] >= m.value[j - 1] &&
        m.value[j] > m.value[j + 1])
      peaks.push_back(m.omega[j]);
  REQUIRE(peaks.size() == 3);
  check_rel(peaks[1] - peaks[0], two_pi * frozen::fsr_signal_hz,
            2.5 * sc.grid.step_s() / (two_pi * frozen::fsr_signal_hz));
  check_rel(peaks[2] - peaks[1], two_pi * frozen::fsr_signal_hz,
            2.5 * sc.grid.step_s() / (two_pi * frozen::fsr_signal_hz));

  // the doubly resonant marginal keeps only suppressed side structure: each
  // neighbouring line survives as a doublet pinched between the signal comb
  // at +-FSR_s and the energy conserving image of the idler comb at
  // +-FSR_i, a few percent high at most
  Spectrum full = marginal(jsa, Field::signal);
  const double fmax = *std::max_element(full.value.begin(), full.value.end());
  int side_lo = 0, side_hi = 0;
  for (size_t j = 1; j + 1 < full.value.size(); ++j) {
    if (!(full.value[j] > 1e-3 * fmax && full.value[j] >= full.value[j - 1] &&
          full.value[j] > full.value[j + 1]))
      continue;
    const double off = full.omega[j] - sc.grid.center_s;
    if (std::abs(off) < 2.0 * sc.grid.step_s()) continue;  // central line
    CHECK(full.value[j] < 0.06 * fmax);
    check_abs(std::abs(off), two_pi * frozen::fsr_signal_hz, two_pi * 1.2e9);
    (off < 0 ? side_lo : side_hi)++;
  }
  CHECK(side_lo >= 1);
  CHECK(side_hi >= 1);
}

TEST_CASE("spectral: cluster comb and vernier spacing") {
  const spdc::Scenario& sc = testdev::device();
  const double span = two_pi * 1000e9;

  // ideal retro phase: emission survives only at the central coincidence
  Spectrum ideal = cluster_spectrum(sc.crystal, sc.cavity, span);
  std::vector<Cluster> one =
      find_clusters(ideal, 1e-3, 3.0 * two_pi * frozen::fsr_signal_hz);
  CHECK(one.size() == 1);
  check_abs((one[0].center - sc.grid.center_s) / two_pi, 0.0, 2e9);

  // residual phase leaks the two neighbouring clusters back in
  CavitySpec leaky = sc.cavity;
  leaky.phi_p = 0.6;
  Spectrum s = cluster_spectrum(sc.crystal, leaky, span);
  std::vector<Cluster> three =
      find_clusters(s, 1e-3, 3.0 * two_pi * frozen::fsr_signal_hz);
  REQUIRE(three.size() == 3);

  const double spacing_lo = three[1].center - three[0].center;
  const double spacing_hi = three[2].center - three[1].center;
  const double vernier = two_pi * vernier_spacing(sc.crystal);
  check_rel(spacing_lo, vernier, 0.10);
  check_rel(spacing_hi, vernier, 0.10);

  // side clusters carry a few percent of the central weight at phi_p = 0.6
  const double r_lo = three[0].weight / three[1].weight;
  const double r_hi = three[2].weight / three[1].weight;
  CHECK(r_lo > 0.01);
  CHECK(r_lo < 0.08);
  CHECK(r_hi > 0.01);
  CHECK(r_hi < 0.08);

  // identical dispersion on both arms has no vernier
  spdc::Scenario same = testdev::device();
  same.crystal.idler_axis = Axis::z;
  same.crystal.idler_wavelength_m = same.crystal.signal_wavelength_m;
  CHECK_THROWS_AS(vernier_spacing(same.crystal), DomainError);
}
