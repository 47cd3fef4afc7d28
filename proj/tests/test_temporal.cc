#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "cavityspdc/prng.hh"
#include "cavityspdc/temporal.hh"
#include "cavityspdc/units.hh"
#include "device.hh"

using namespace spdc;
using testdev::check_abs;
using testdev::check_rel;

namespace {

Histogram synth_xcorr(double dnu_s, double dnu_i, double amp, double base,
                      double t0, int bins, double half_span_s, uint64_t seed,
                      bool noise) {
  SplitMix64 rng(seed);
  Histogram h;
  for (int b = 0; b < bins; ++b) {
    const double t = -half_span_s + 2.0 * half_span_s * b / (bins - 1);
    const double mu = cross_correlation_model(dnu_s, dnu_i, amp, base, t0, t);
    h.centers.push_back(t);
    h.counts.push_back(noise ? double(poisson(rng, mu)) : mu);
  }
  return h;
}

Histogram synth_hom(double vis, double gamma, double base, int bins,
                    double half_span_s, uint64_t seed, bool noise) {
  SplitMix64 rng(seed);
  Histogram h;
  for (int b = 0; b < bins; ++b) {
    const double t = -half_span_s + 2.0 * half_span_s * b / (bins - 1);
    const double mu = hom_model(vis, gamma, base, t);
    h.centers.push_back(t);
    h.counts.push_back(noise ? double(poisson(rng, mu)) : mu);
  }
  return h;
}

}  // namespace

TEST_CASE("temporal: cross correlation model shape") {
  const double dnu_s = 167.9e6, dnu_i = 180.4e6, a = 9900.0, b = 100.0;
  check_rel(cross_correlation_model(dnu_s, dnu_i, a, b, 0.0, 0.0), a + b,
            1e-15);
  // rise carries the signal bandwidth, decay the idler's
  const double dt = 0.8e-9;
  check_rel(cross_correlation_model(dnu_s, dnu_i, a, b, 0.0, -dt),
            b + a * std::exp(-two_pi * dnu_s * dt), 1e-13);
  check_rel(cross_correlation_model(dnu_s, dnu_i, a, b, 0.0, dt),
            b + a * std::exp(-two_pi * dnu_i * dt), 1e-13);
  // far tails settle on the baseline
  check_rel(cross_correlation_model(dnu_s, dnu_i, a, b, 0.0, 80e-9), b,
            1e-12);
  // peak shifts with t0
  check_rel(cross_correlation_model(dnu_s, dnu_i, a, b, 1.3e-9, 1.3e-9),
            a + b, 1e-15);
}

TEST_CASE("temporal: hom model shape") {
  check_rel(hom_model(0.912, 1.3e-9, 500.0, 0.0), 500.0 * (1.0 - 0.912),
            1e-13);
  check_rel(hom_model(0.912, 1.3e-9, 500.0, 1.3e-9),
            500.0 * (1.0 - 0.912 / 2.0), 1e-13);
  // ~770 half widths out the residual dip is V (gamma/dt)^2 ~ 1.5e-6
  check_rel(hom_model(0.912, 1.3e-9, 500.0, 1e-6), 500.0, 1e-5);
}

TEST_CASE("temporal: analytic gradients agree with finite differences") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const double p[5] = {1e8 * (1.0 + rng.uniform()),     // dnu_s
                         1e8 * (1.0 + rng.uniform()),     // dnu_i
                         5e3 * (0.5 + rng.uniform()),     // amp
                         2e2 * (0.5 + rng.uniform()),     // base
                         1e-9 * (rng.uniform() - 0.5)};   // t0
    const double t = 4e-9 * (rng.uniform() - 0.5);

    double grad[5];
    cross_correlation_gradient(p[0], p[1], p[2], p[3], p[4], t, grad);
    for (int k = 0; k < 5; ++k) {
      double lo[5], hi[5];
      for (int m = 0; m < 5; ++m) lo[m] = hi[m] = p[m];
      const double h = 1e-6 * std::max(std::abs(p[k]), 1e-12);
      lo[k] -= h;
      hi[k] += h;
      const double fd = (cross_correlation_model(hi[0], hi[1], hi[2], hi[3],
                                                 hi[4], t) -
                         cross_correlation_model(lo[0], lo[1], lo[2], lo[3],
                                                 lo[4], t)) /
                        (2.0 * h);
      check_abs(grad[k], fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }

    const double q[3] = {0.3 + 0.6 * rng.uniform(),      // visibility
                         1e-9 * (0.5 + rng.uniform()),   // gamma
                         1e3 * (0.5 + rng.uniform())};   // base
    double hg[3];
    hom_gradient(q[0], q[1], q[2], t, hg);
    for (int k = 0; k < 3; ++k) {
      double lo[3], hi[3];
      for (int m = 0; m < 3; ++m) lo[m] = hi[m] = q[m];
      const double h = 1e-6 * std::abs(q[k]);
      lo[k] -= h;
      hi[k] += h;
      const double fd =
          (hom_model(hi[0], hi[1], hi[2], t) - hom_model(lo[0], lo[1], lo[2], t)) /
          (2.0 * h);
      check_abs(hg[k], fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("temporal: noiseless cross correlation is recovered from rough starts") {
  const double truth[5] = {167.9e6, 180.4e6, 9900.0, 100.0, 0.4e-9};
  Histogram h = synth_xcorr(truth[0], truth[1], truth[2], truth[3], truth[4],
                            241, 12e-9, 0, false);
  const std::vector<double> start{truth[0] * 1.2, truth[1] * 0.8,
                                  truth[2] * 1.15, truth[3] * 0.9,
                                  truth[4] + 0.3e-9};
  FitReport r = fit_cross_correlation(h, FitWeights::uniform, start);
  CHECK(r.converged);
  check_rel(r.param("dnu_signal_hz"), truth[0], 1e-6);
  check_rel(r.param("dnu_idler_hz"), truth[1], 1e-6);
  check_rel(r.param("amplitude"), truth[2], 1e-6);
  check_rel(r.param("baseline"), truth[3], 1e-5);
  check_abs(r.param("t0_s"), truth[4], 1e-12);

  for (size_t i = 1; i < r.rss_trace.size(); ++i)
    CHECK(r.rss_trace[i] <= r.rss_trace[i - 1]);
  CHECK(r.iterations < 200);
  CHECK_THROWS_AS(r.param("no_such_parameter"), DomainError);
}

TEST_CASE("temporal: poisson counting noise leaves percent level accuracy") {
  const double truth[5] = {167.9e6, 180.4e6, 1e4, 100.0, 0.0};
  Histogram h = synth_xcorr(truth[0], truth[1], truth[2], truth[3], truth[4],
                            241, 12e-9, 20260822, true);
  FitReport r = fit_cross_correlation(h);
  CHECK(r.converged);
  check_rel(r.param("dnu_signal_hz"), truth[0], 0.02);
  check_rel(r.param("dnu_idler_hz"), truth[1], 0.02);
  // the quoted uncertainties have a sane scale: within a decade of the
  // actual deviation and well below the value itself
  CHECK(r.uncertainty("dnu_signal_hz") < 0.05 * truth[0]);
  CHECK(r.uncertainty("dnu_signal_hz") > 1e-4 * truth[0]);
}

TEST_CASE("temporal: degenerate histograms are rejected") {
  Histogram flat;
  for (int b = 0; b < 64; ++b) {
    flat.centers.push_back(b * 0.1e-9);
    flat.counts.push_back(250.0);
  }
  CHECK_THROWS_AS(fit_cross_correlation(flat), DegenerateData);

  Histogram tiny = synth_xcorr(1.7e8, 1.8e8, 1e4, 100.0, 0.0, 12, 6e-9, 1,
                               false);
  CHECK_THROWS_AS(fit_cross_correlation(tiny), DegenerateData);

  Histogram bad;
  bad.centers = {0.0, 1.0, 0.5};
  bad.counts = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("temporal: hom dip fit recovers visibility") {
  Histogram clean = synth_hom(0.912, 1.3e-9, 8e3, 121, 8e-9, 0, false);
  FitReport r = fit_hom(clean, FitWeights::uniform);
  CHECK(r.converged);
  check_rel(r.param("visibility"), 0.912, 1e-7);
  check_rel(r.param("gamma_s"), 1.3e-9, 1e-6);
  check_rel(r.param("baseline"), 8e3, 1e-7);

  Histogram noisy = synth_hom(0.912, 1.3e-9, 1e4, 121, 8e-9, 31415, true);
  FitReport rn = fit_hom(noisy);
  CHECK(rn.converged);
  check_abs(rn.param("visibility"), 0.912, 0.01);

  // visibility stays inside its box even for a full-contrast dip
  Histogram full = synth_hom(1.0, 1.3e-9, 8e3, 121, 8e-9, 0, false);
  FitReport rf = fit_hom(full, FitWeights::uniform);
  CHECK(rf.param("visibility") <= 1.0 + 1e-12);
  CHECK(rf.param("visibility") > 0.999);

  Histogram tiny = synth_hom(0.9, 1.3e-9, 8e3, 8, 8e-9, 0, false);
  CHECK_THROWS_AS(fit_hom(tiny), DegenerateData);
}

TEST_CASE("temporal: linear g2 versus power") {
  const std::vector<double> power{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<double> g2;
  for (double p : power) g2.push_back(0.005 + 0.012 * p);

  FitReport r = fit_linear_g2(power, g2);
  check_rel(r.param("intercept"), 0.005, 1e-10);
  check_rel(r.param("slope"), 0.012, 1e-10);
  check_rel(linear_g2_prediction(r, 2.0), 0.029, 1e-10);
  CHECK(r.warnings.empty());

  // weighted version reproduces the same exact line
  FitReport rw = fit_linear_g2(power, g2,
                               std::vector<double>(power.size(), 0.001));
  check_rel(rw.param("slope"), 0.012, 1e-10);

  // a negative intercept is reported, not clipped
  std::vector<double> below;
  for (double p : power) below.push_back(-0.002 + 0.012 * p);
  FitReport rb = fit_linear_g2(power, below);
  check_rel(rb.param("intercept"), -0.002, 1e-9);
  CHECK(!rb.warnings.empty());

  CHECK_THROWS_AS(fit_linear_g2({1.0}, {0.01}), DegenerateData);
  CHECK_THROWS_AS(fit_linear_g2({1.0, 1.0, 1.0}, {0.01, 0.02, 0.03}),
                  DegenerateData);
}

TEST_CASE("temporal: visibility budget multiplies degradation factors") {
  check_rel(visibility_budget({0.962, 0.969, 0.964}), 0.962 * 0.969 * 0.964,
            1e-15);
  check_rel(visibility_budget({}), 1.0, 1e-15);
  CHECK_THROWS_AS(visibility_budget({0.9, 1.2}), DomainError);
  CHECK_THROWS_AS(visibility_budget({-0.1}), DomainError);
}

TEST_CASE("temporal: linewidth report spells out the conventions") {
  LinewidthReport lr = predicted_linewidth_from_fit(167.9e6);
  check_rel(lr.bandwidth_hz, 167.9e6, 1e-15);
  check_rel(lr.coherence_1_over_2pidnu_s, 1.0 / (two_pi * 167.9e6), 1e-13);
  check_rel(lr.coherence_1_over_dnu_s, 1.0 / 167.9e6, 1e-13);
  check_rel(lr.halfwidth_ln2_over_pidnu_s,
            std::log(2.0) / (pi * 167.9e6), 1e-13);

  const std::string text = lr.text();
  CHECK(text.find("0.9479") != std::string::npos);  // 1/(2 pi dnu) in ns
  CHECK(text.find("5.9559") != std::string::npos);  // 1/dnu in ns
  CHECK(text.find("1.3141") != std::string::npos);  // ln2/(pi dnu) in ns
}
