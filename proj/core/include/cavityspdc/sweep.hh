#pragma once
// Parameter studies built on the spectral and Schmidt layers: purity versus
// pump pulse length, the optimum pulse length, and the photon-budget
// arithmetic of the source.
#include <vector>

#include "cavityspdc/scenario.hh"
#include "cavityspdc/schmidt.hh"

namespace spdc {

struct SweepRow {
  double tau_p_s = 0.0;
  double schmidt_K = 1.0;
  double purity = 1.0;
  double central_fraction = 0.0;  // intensity inside the central mode window
};

struct SweepTable {
  std::vector<SweepRow> rows;  // tau strictly increasing
  PumpSpec::Shape shape = PumpSpec::Shape::gaussian;
  bool filtered = false;
};

// Rectangular window in (omega_s, omega_i), rad/s.
struct ModeWindow {
  double lo_s = 0.0, hi_s = 0.0;
  double lo_i = 0.0, hi_i = 0.0;
};

// One full pipeline pass: build the joint amplitude for this pulse length,
// optionally apply the scenario's filters, decompose. The returned row also
// carries the intensity fraction inside the central mode window.
SweepRow evaluate_point(const Scenario& sc, double tau_p_s,
                        PumpSpec::Shape shape, bool filtered);

// evaluate_point over a strictly increasing pulse-length list.
SweepTable purity_sweep(const Scenario& sc, const std::vector<double>& taus,
                        PumpSpec::Shape shape, bool filtered);

struct OptimalPulse {
  double tau_p_s = 0.0;
  double purity = 0.0;
  bool boundary = false;  // optimum sits on a bracket edge
};

// Golden-section maximization of purity over [tau_lo, tau_hi] down to a
// bracket below 0.01 ns. A monotone purity profile is reported as a
// boundary optimum; a profile dipping below both ends has no maximum to
// find and throws NoInteriorMaximum.
OptimalPulse optimal_pulse_length(const Scenario& sc, double tau_lo,
                                  double tau_hi, PumpSpec::Shape shape,
                                  bool filtered);

// Fraction of the joint intensity inside the window; the grid must be
// normalized. Throws WindowOffGrid when the window leaves the grid.
double central_mode_fraction(const JSAGrid& jsa, const ModeWindow& w);

// Window of plus/minus half a free spectral range around the grid centers.
ModeWindow central_window(const Scenario& sc);

// Probability that a photon of the field leaves through the output coupler
// rather than dying in the mirrors or the bulk,
//   (1 - R2) / ((1 - R1) + (1 - R2) + 2 alpha L), clamped to [0, 1].
double escape_efficiency(const CavitySpec& cav, Field f, double length_m);

struct HeraldingBudget {
  double raw = 1.0;        // product of the factors times the detector
  double corrected = 1.0;  // detector divided back out
};

// Multiplies independent heralding factors (escape, path transmission,
// filter acceptance, ...); `raw` includes the detector efficiency, i.e.
// what a counter sees, `corrected` is the source-side figure.
HeraldingBudget heralding_budget(const std::vector<double>& factors,
                                 double detector_efficiency);

}  // namespace spdc
