#pragma once
// Time-domain observables: the two-sided exponential cross-correlation
// peak, the HOM dip, and the linear power dependence of the marginal g2.
// Fitting is Levenberg-Marquardt on finite-difference Jacobians with
// Poisson weighting for counting data. Analytic gradients of each model are
// exposed so they can be checked against the numerics.
#include <string>
#include <vector>

#include "cavityspdc/errors.hh"

namespace spdc {

// binned counting data; centers strictly increasing, counts >= 0
struct Histogram {
  std::vector<double> centers;  // seconds (or watts for power scans)
  std::vector<double> counts;
  void validate() const;
};

struct FitReport {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> sigma;      // 1-sigma from the Jacobian at the optimum
  double rss = 0.0;               // weighted residual sum of squares
  bool converged = false;
  int iterations = 0;
  std::vector<double> rss_trace;  // accepted steps only, non-increasing
  std::vector<std::string> warnings;

  double param(const std::string& name) const;  // DomainError when missing
  double uncertainty(const std::string& name) const;
};

// Coincidence rate around zero delay: baseline plus a two-sided exponential
// whose rise carries the signal bandwidth and whose fall carries the idler's,
//   f(t) = B + A exp(+2 pi dnu_s (t - t0))   t <  t0
//   f(t) = B + A exp(-2 pi dnu_i (t - t0))   t >= t0
// with both bandwidths in Hz.
double cross_correlation_model(double dnu_s, double dnu_i, double amp,
                               double base, double t0, double t);
void cross_correlation_gradient(double dnu_s, double dnu_i, double amp,
                                double base, double t0, double t,
                                double grad[5]);

// HOM coincidence rate vs arm delay, Lorentzian dip of visibility V and
// half width gamma on baseline B: f(dt) = B (1 - V / (1 + (dt/gamma)^2)).
double hom_model(double visibility, double gamma_s, double base, double dt);
void hom_gradient(double visibility, double gamma_s, double base, double dt,
                  double grad[3]);

// weighting of counting data inside the fits
enum class FitWeights { poisson, uniform };

// Fit the cross-correlation model. Requires >= 20 bins. Starting values are
// derived from the histogram unless `start` (dnu_s, dnu_i, amp, base, t0)
// is given, as the property tests do. Throws DegenerateData on flat or
// undersized input, NonConvergence when the iteration cap is hit while the
// step is still moving.
FitReport fit_cross_correlation(const Histogram& h,
                                FitWeights w = FitWeights::poisson,
                                const std::vector<double>& start = {});

// Fit the HOM dip; visibility is constrained to [0, 1], gamma to > 0.
FitReport fit_hom(const Histogram& h, FitWeights w = FitWeights::poisson,
                  const std::vector<double>& start = {});

// Weighted linear fit of g2 vs pump power, g2(P) = intercept + slope P,
// closed form; the slope is per unit of the power vector. sigma entries
// weight each point when given. A negative intercept is reported in
// warnings, never silently clipped.
FitReport fit_linear_g2(const std::vector<double>& power,
                        const std::vector<double>& g2,
                        const std::vector<double>& sigma = {});
double linear_g2_prediction(const FitReport& r, double power);

// Product of independent interference-degradation factors.
double visibility_budget(const std::vector<double>& factors);

// Coherence times implied by a fitted bandwidth, all common conventions
// spelled out so numbers from different communities can be compared.
struct LinewidthReport {
  double bandwidth_hz = 0.0;
  double coherence_1_over_2pidnu_s = 0.0;  // 1 / (2 pi dnu)
  double coherence_1_over_dnu_s = 0.0;     // 1 / dnu
  double halfwidth_ln2_over_pidnu_s = 0.0; // ln 2 / (pi dnu), exponential HWHM
  std::string text() const;
};
LinewidthReport predicted_linewidth_from_fit(double dnu_hz);

}  // namespace spdc
