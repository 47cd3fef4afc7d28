#pragma once
// Joint spectral amplitude of a doubly resonant downconversion cavity.
// The model chain is
//   psi(ws, wi) = sqrt(A_s A_i) * D(dk) * alpha(ws + wi) * phi(dk)
// with A the Airy intensity comb of each resonant field, D the coherent
// double-pass pump factor, alpha the pump envelope and phi the collinear
// phase-matching amplitude. Everything here works on angular frequencies.
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cavityspdc/dispersion.hh"
#include "cavityspdc/errors.hh"
#include "cavityspdc/units.hh"

namespace spdc {

struct PumpSpec {
  enum class Shape { cw, gaussian, square };

  double omega_p0 = 0.0;  // central frequency, rad/s
  Shape shape = Shape::gaussian;
  double tau_p_s = 0.0;    // intensity FWHM of the pulse; unused for cw
  double sigma_f = 0.0;    // gaussian amplitude width in rad/s

  // Pulsed gaussian with intensity FWHM tau_p; sigma_f = 2 sqrt(ln 2) / tau_p.
  static PumpSpec gaussian_pulse(double omega_p0, double tau_p_s);
  // Flat-top pulse of duration tau_p; spectral amplitude is a sinc.
  static PumpSpec square_pulse(double omega_p0, double tau_p_s);
  // Monochromatic drive, represented as a gaussian of width sigma_f chosen
  // far below every other spectral scale in the problem.
  static PumpSpec cw(double omega_p0, double sigma_f);

  void validate() const;
};

// Mirror and loss parameters of the monolithic cavity. R1 is the pump-side
// (highly reflective) coating, R2 the output coupler, both power
// reflectivities per field. r_p is the amplitude reflectivity seen by the
// pump at the far facet and phi_p the residual phase between the forward and
// retro-reflected pump at the crystal. delta1/delta2 are coating phases of
// the downconverted fields, alpha the bulk power loss in 1/m.
struct CavitySpec {
  double R1_signal = 0.0, R1_idler = 0.0;
  double R2_signal = 0.0, R2_idler = 0.0;
  double r_p = 0.0;
  double phi_p = 0.0;
  double delta1_signal = 0.0, delta2_signal = 0.0;
  double delta1_idler = 0.0, delta2_idler = 0.0;
  double alpha = 0.0;

  double R1(Field f) const;
  double R2(Field f) const;
  double mirror_phase(Field f) const;  // delta1 + delta2 for that field
  bool resonant(Field f) const { return R1(f) > 0.0 && R2(f) > 0.0; }
  void validate() const;
};

// Uniform rectangular grid in (omega_s, omega_i), inclusive endpoints.
struct FrequencyGrid {
  double center_s = 0.0, center_i = 0.0;  // rad/s
  double span_s = 0.0, span_i = 0.0;      // full width, rad/s
  int n_s = 0, n_i = 0;
  // accept steps coarser than linewidth/8 (documented study shortcut; every
  // result produced this way is flagged by the caller)
  bool relaxed_guard = false;

  double step_s() const { return span_s / (n_s - 1); }
  double step_i() const { return span_i / (n_i - 1); }
  double omega_s(int j) const { return center_s + span_s * (double(j) / (n_s - 1) - 0.5); }
  double omega_i(int k) const { return center_i + span_i * (double(k) / (n_i - 1) - 0.5); }
  void validate() const;
};

// Sampled joint amplitude. Row index runs over signal frequency, column
// index over idler. When `normalized` is set, sum |psi|^2 dws dwi = 1.
struct JSAGrid {
  Eigen::MatrixXcd amp;
  FrequencyGrid grid;
  bool normalized = false;
  // scale factor that was multiplied in to normalize; amp/norm_scale
  // recovers the raw model amplitude
  double norm_scale = 1.0;

  double intensity_sum() const;  // sum |psi|^2 dws dwi
  void validate() const;
};

// Spectral filter applied to one axis of a JSA. FWHM is the intensity full
// width in Hz. The airy shape needs the etalon's own free spectral range.
struct FilterSpec {
  enum class Kind { lorentzian, airy };
  Kind kind = Kind::lorentzian;
  Field axis = Field::idler;   // signal or idler
  double center = 0.0;          // rad/s
  double fwhm_hz = 0.0;
  double etalon_fsr_hz = 0.0;   // airy only
  void validate() const;
};

// One-dimensional spectrum: abscissa in rad/s plus values.
struct Spectrum {
  std::vector<double> omega;
  std::vector<double> value;
};

// --- pointwise model factors ---

// Pump amplitude at the sum frequency ws + wi, peak normalized to 1.
std::complex<double> pump_envelope(const PumpSpec& p, double omega_s,
                                   double omega_i);

// Collinear phase-matching amplitude sinc(dk L / 2) exp(i dk L / 2).
std::complex<double> phase_matching(const CrystalSpec& c, double omega_s,
                                    double omega_i);

// Magnitude of the coherent sum of the forward and retro-reflected pump
// passes, sqrt(1 + r_p^2 + 2 r_p cos(dk L + phi_p)); lies in
// [|1 - r_p|, 1 + r_p].
double double_pass_factor(const CavitySpec& cav, double dk, double length_m);

// Cavity finesse of a resonant field from the round-trip power
// R1 R2 exp(-2 alpha L). Zero when the round trip loses everything; throws
// DegenerateCavity at or above unity round-trip power.
double finesse(const CavitySpec& cav, Field f, double length_m);

// Airy intensity transmission comb at frequency omega, in (0, 1]. Unity on
// resonance, 1 / (1 + 4 F^2 / pi^2) at anti-resonance.
double airy(const CavitySpec& cav, const CrystalSpec& c, Field f,
            double omega);

// Round-trip phase 2 n(omega) omega L / c plus the field's coating phases.
double roundtrip_phase(const CavitySpec& cav, const CrystalSpec& c, Field f,
                       double omega);

// FWHM linewidth in Hz of a resonant field at its design wavelength.
double linewidth(const CavitySpec& cav, const CrystalSpec& c, Field f);

// Comb line of the field nearest to omega_guess, by bisecting the round-trip
// phase onto the closest multiple of 2 pi.
double resonance_near(const CavitySpec& cav, const CrystalSpec& c, Field f,
                      double omega_guess);

// Doubly resonant operating point: signal line nearest the design
// wavelength, idler line nearest the energy-conserving partner, and the pump
// center their sum.
struct ResonantCenters {
  double omega_s = 0.0, omega_i = 0.0, omega_p = 0.0;
};
ResonantCenters center_on_resonances(const CrystalSpec& c,
                                     const CavitySpec& cav);

// --- grid-level operations ---

// Sample the full model on the grid and normalize to unit intensity.
// Enforces the step <= linewidth/8 guard per resonant axis unless the grid
// is flagged relaxed. Throws ResolutionTooCoarse, OutOfRange.
JSAGrid build_jsa(const CrystalSpec& c, const CavitySpec& cav,
                  const PumpSpec& p, const FrequencyGrid& grid);

// Multiply the amplitude by the filters' amplitude transmissions and
// renormalize. Throws FilterOffGrid when a center misses its axis range.
JSAGrid apply_filter(const JSAGrid& jsa, const std::vector<FilterSpec>& filters);

// Marginal intensity density of one axis; integrates to 1 over the grid.
Spectrum marginal(const JSAGrid& jsa, Field f);

// Signal-frequency spectrum along the energy-conserving line
// wi = omega_p - ws for a cw pump at the doubly resonant point: product of
// the two Airy combs, the phase-matching intensity and the squared
// double-pass factor, peak normalized. span is the full width in rad/s.
Spectrum cluster_spectrum(const CrystalSpec& c, const CavitySpec& cav,
                          double span);

// Mode-spacing estimate of the cluster comb from the free-spectral-range
// mismatch of the two fields, FSR_s FSR_i / |FSR_s - FSR_i| in Hz.
double vernier_spacing(const CrystalSpec& c);

// Contiguous groups of spectral lines. Samples above `threshold` separated
// by gaps wider than `gap` (rad/s) form one cluster each; centers are
// intensity-weighted centroids.
struct Cluster {
  double center = 0.0;  // rad/s
  double weight = 0.0;  // integrated value
};
std::vector<Cluster> find_clusters(const Spectrum& s, double threshold,
                                   double gap);

}  // namespace spdc
