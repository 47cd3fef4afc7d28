#include "cavityspdc/spectral.hh"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavityspdc/parallel.hh"

namespace spdc {

namespace {

constexpr double ln2 = 0.6931471805599453;

double sinc(double x) {
  // series switch keeps the removable singularity smooth to ~1e-26
  return std::abs(x) < 1e-6 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

// --- specs ---

PumpSpec PumpSpec::gaussian_pulse(double omega_p0, double tau_p_s) {
  PumpSpec p;
  p.omega_p0 = omega_p0;
  p.shape = Shape::gaussian;
  p.tau_p_s = tau_p_s;
  p.sigma_f = 2.0 * std::sqrt(ln2) / tau_p_s;
  p.validate();
  return p;
}

PumpSpec PumpSpec::square_pulse(double omega_p0, double tau_p_s) {
  PumpSpec p;
  p.omega_p0 = omega_p0;
  p.shape = Shape::square;
  p.tau_p_s = tau_p_s;
  p.sigma_f = 2.0 * std::sqrt(ln2) / tau_p_s;  // reference value only
  p.validate();
  return p;
}

PumpSpec PumpSpec::cw(double omega_p0, double sigma_f) {
  PumpSpec p;
  p.omega_p0 = omega_p0;
  p.shape = Shape::cw;
  p.tau_p_s = 0.0;
  p.sigma_f = sigma_f;
  p.validate();
  return p;
}

void PumpSpec::validate() const {
  if (!(omega_p0 > 0.0)) throw DomainError("pump: omega_p0 must be > 0");
  switch (shape) {
    case Shape::cw:
      if (!(sigma_f > 0.0)) throw DomainError("pump: cw width must be > 0");
      break;
    case Shape::gaussian: {
      if (!(tau_p_s > 0.0)) throw DomainError("pump: tau_p must be > 0");
      const double derived = 2.0 * std::sqrt(ln2) / tau_p_s;
      if (std::abs(sigma_f - derived) > 1e-9 * derived)
        throw DomainError("pump: sigma_f inconsistent with tau_p");
      break;
    }
    case Shape::square:
      if (!(tau_p_s > 0.0)) throw DomainError("pump: tau_p must be > 0");
      break;
  }
}

double CavitySpec::R1(Field f) const {
  if (f == Field::signal) return R1_signal;
  if (f == Field::idler) return R1_idler;
  throw DomainError("cavity: pump field has no signal/idler mirror data");
}

double CavitySpec::R2(Field f) const {
  if (f == Field::signal) return R2_signal;
  if (f == Field::idler) return R2_idler;
  throw DomainError("cavity: pump field has no signal/idler mirror data");
}

double CavitySpec::mirror_phase(Field f) const {
  if (f == Field::signal) return delta1_signal + delta2_signal;
  if (f == Field::idler) return delta1_idler + delta2_idler;
  throw DomainError("cavity: pump field has no coating phase data");
}

void CavitySpec::validate() const {
  for (double r : {R1_signal, R1_idler, R2_signal, R2_idler})
    if (!(r >= 0.0 && r <= 1.0))
      throw DomainError("cavity: power reflectivities must be in [0, 1]");
  if (!(r_p >= 0.0 && r_p <= 1.0))
    throw DomainError("cavity: pump amplitude reflectivity must be in [0, 1]");
  if (!(alpha >= 0.0)) throw DomainError("cavity: loss must be >= 0");
  if (!std::isfinite(phi_p)) throw DomainError("cavity: phi_p must be finite");
}

void FrequencyGrid::validate() const {
  if (n_s < 2 || n_i < 2)
    throw DomainError("grid: need at least 2 points per axis");
  if (!(span_s > 0.0 && span_i > 0.0))
    throw DomainError("grid: spans must be > 0");
  if (!(center_s > 0.5 * span_s && center_i > 0.5 * span_i))
    throw DomainError("grid: axis reaches nonpositive frequencies");
}

double JSAGrid::intensity_sum() const {
  return amp.squaredNorm() * grid.step_s() * grid.step_i();
}

void JSAGrid::validate() const {
  if (!amp.allFinite()) throw DomainError("jsa: non-finite amplitude");
  if (amp.rows() != grid.n_s || amp.cols() != grid.n_i)
    throw DomainError("jsa: amplitude shape disagrees with grid");
  if (normalized && std::abs(intensity_sum() - 1.0) > 1e-9)
    throw DomainError("jsa: normalized flag set but intensity sum is " +
                      fmt(intensity_sum()));
}

void FilterSpec::validate() const {
  if (axis == Field::pump)
    throw DomainError("filter: axis must be signal or idler");
  if (!(center > 0.0)) throw DomainError("filter: center must be > 0");
  if (!(fwhm_hz > 0.0)) throw DomainError("filter: FWHM must be > 0");
  if (kind == Kind::airy && !(etalon_fsr_hz > fwhm_hz))
    throw DomainError("filter: etalon FSR must exceed the FWHM");
}

// --- pointwise factors ---

std::complex<double> pump_envelope(const PumpSpec& p, double omega_s,
                                   double omega_i) {
  const double det = omega_s + omega_i - p.omega_p0;
  switch (p.shape) {
    case PumpSpec::Shape::cw:
    case PumpSpec::Shape::gaussian:
      return std::exp(-det * det / (2.0 * p.sigma_f * p.sigma_f));
    case PumpSpec::Shape::square:
      return sinc(0.5 * det * p.tau_p_s);
  }
  throw DomainError("pump_envelope: bad shape");
}

std::complex<double> phase_matching(const CrystalSpec& c, double omega_s,
                                    double omega_i) {
  const double arg = 0.5 * wavevector_mismatch(c, omega_s, omega_i) *
                     c.length_m;
  return sinc(arg) * std::exp(std::complex<double>(0.0, arg));
}

double double_pass_factor(const CavitySpec& cav, double dk, double length_m) {
  const double s = 1.0 + cav.r_p * cav.r_p +
                   2.0 * cav.r_p * std::cos(dk * length_m + cav.phi_p);
  // roundoff can push the fully destructive point a hair below zero
  return std::sqrt(std::max(0.0, s));
}

double finesse(const CavitySpec& cav, Field f, double length_m) {
  const double x = cav.R1(f) * cav.R2(f) * std::exp(-2.0 * cav.alpha *
                                                    length_m);
  if (x >= 1.0)
    throw DegenerateCavity("finesse: round-trip power " + fmt(x) +
                           " >= 1 for " +
                           (f == Field::signal ? "signal" : "idler"));
  if (x == 0.0) return 0.0;
  return pi * std::pow(x, 0.25) / (1.0 - std::sqrt(x));
}

double roundtrip_phase(const CavitySpec& cav, const CrystalSpec& c, Field f,
                       double omega) {
  const double n = refractive_index(c.model(f), wavelength_from_omega(omega),
                                    c.temperature_c);
  return 2.0 * n * omega * c.length_m / c_light + cav.mirror_phase(f);
}

double airy(const CavitySpec& cav, const CrystalSpec& c, Field f,
            double omega) {
  const double F = finesse(cav, f, c.length_m);
  const double s = std::sin(0.5 * roundtrip_phase(cav, c, f, omega));
  return 1.0 / (1.0 + 4.0 * F * F / (pi * pi) * s * s);
}

double linewidth(const CavitySpec& cav, const CrystalSpec& c, Field f) {
  const double F = finesse(cav, f, c.length_m);
  if (!(F > 0.0))
    throw DomainError("linewidth: field is not resonant");
  return fsr(c, c.model(f), c.design_wavelength(f), c.temperature_c) / F;
}

double resonance_near(const CavitySpec& cav, const CrystalSpec& c, Field f,
                      double omega_guess) {
  const double phase0 = roundtrip_phase(cav, c, f, omega_guess);
  const double target = two_pi * std::round(phase0 / two_pi);
  const double fsr_ang = two_pi * fsr(c, c.model(f),
                                      wavelength_from_omega(omega_guess),
                                      c.temperature_c);
  // the phase is strictly increasing in omega, so the nearest comb line is
  // the unique root of phase - target inside a window of a bit over one FSR
  double lo = omega_guess - 1.2 * fsr_ang;
  double hi = omega_guess + 1.2 * fsr_ang;
  double flo = roundtrip_phase(cav, c, f, lo) - target;
  double fhi = roundtrip_phase(cav, c, f, hi) - target;
  if (!(flo < 0.0 && fhi > 0.0))
    throw NumericalFailure("resonance_near: failed to bracket the comb line");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((roundtrip_phase(cav, c, f, mid) - target) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ResonantCenters center_on_resonances(const CrystalSpec& c,
                                     const CavitySpec& cav) {
  ResonantCenters out;
  const double ws0 = omega_from_wavelength(c.signal_wavelength_m);
  const double wi0 = omega_from_wavelength(c.idler_wavelength_m);
  out.omega_s = cav.resonant(Field::signal)
                    ? resonance_near(cav, c, Field::signal, ws0)
                    : ws0;
  // keep the pair sum on the design value while snapping the idler to its
  // own comb, then let the pump carry the residual detuning
  const double wi_guess = (ws0 + wi0) - out.omega_s;
  out.omega_i = cav.resonant(Field::idler)
                    ? resonance_near(cav, c, Field::idler, wi_guess)
                    : wi_guess;
  out.omega_p = out.omega_s + out.omega_i;
  return out;
}

// --- grid-level operations ---

JSAGrid build_jsa(const CrystalSpec& c, const CavitySpec& cav,
                  const PumpSpec& p, const FrequencyGrid& grid) {
  c.validate();
  cav.validate();
  p.validate();
  grid.validate();

  for (Field f : {Field::signal, Field::idler}) {
    if (!cav.resonant(f)) continue;
    const double step_hz =
        hz_from_omega(f == Field::signal ? grid.step_s() : grid.step_i());
    const double lw = linewidth(cav, c, f);
    if (step_hz > lw / 8.0 * (1.0 + 1e-12) && !grid.relaxed_guard)
      throw ResolutionTooCoarse(
          std::string(f == Field::signal ? "signal" : "idler") +
          " axis step " + fmt(step_hz) + " Hz exceeds linewidth/8 = " +
          fmt(lw / 8.0) + " Hz; refine the grid or set the relaxed flag");
  }

  const int ns = grid.n_s, ni = grid.n_i;
  JSAGrid out;
  out.grid = grid;
  out.amp.resize(ns, ni);

  // per-axis caches: frequency, sqrt of the Airy comb, wavevector
  std::vector<double> ws(ns), sqa_s(ns), ks(ns);
  std::vector<double> wi(ni), sqa_i(ni), ki(ni);
  const double F_s = finesse(cav, Field::signal, c.length_m);
  const double F_i = finesse(cav, Field::idler, c.length_m);
  const auto axis_fill = [&](Field f, double F, int n, auto omega_of,
                             std::vector<double>& w, std::vector<double>& sqa,
                             std::vector<double>& k) {
    const SellmeierModel& m = c.model(f);
    const double cF = 4.0 * F * F / (pi * pi);
    for (int j = 0; j < n; ++j) {
      w[j] = omega_of(j);
      const double n_j = refractive_index(m, wavelength_from_omega(w[j]),
                                          c.temperature_c);
      k[j] = n_j * w[j] / c_light;
      if (cav.resonant(f)) {
        const double s = std::sin(0.5 * (2.0 * n_j * w[j] * c.length_m /
                                             c_light +
                                         cav.mirror_phase(f)));
        sqa[j] = std::sqrt(1.0 / (1.0 + cF * s * s));
      } else {
        sqa[j] = 1.0;
      }
    }
  };
  axis_fill(Field::signal, F_s, ns, [&](int j) { return grid.omega_s(j); },
            ws, sqa_s, ks);
  axis_fill(Field::idler, F_i, ni, [&](int k) { return grid.omega_i(k); },
            wi, sqa_i, ki);

  const SellmeierModel& pump_model = c.model(Field::pump);
  const double kq = two_pi / c.poling_period_m;
  const double L = c.length_m;
  parallel_for(0, ns, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      for (int k = 0; k < ni; ++k) {
        const double wp = ws[j] + wi[k];
        const double np = refractive_index(pump_model,
                                           wavelength_from_omega(wp),
                                           c.temperature_c);
        const double dk = np * wp / c_light - ks[j] - ki[k] + kq;
        const double arg = 0.5 * dk * L;
        const std::complex<double> pm =
            sinc(arg) * std::exp(std::complex<double>(0.0, arg));
        const double dp = double_pass_factor(cav, dk, L);
        out.amp(j, k) = sqa_s[j] * sqa_i[k] * dp *
                        pump_envelope(p, ws[j], wi[k]) * pm;
      }
    }
  });

  if (!out.amp.allFinite())
    throw NumericalFailure("build_jsa: non-finite amplitude produced");
  const double total = out.amp.squaredNorm() * grid.step_s() * grid.step_i();
  if (!(total > 0.0))
    throw NumericalFailure("build_jsa: amplitude vanished everywhere");
  out.norm_scale = 1.0 / std::sqrt(total);
  out.amp *= out.norm_scale;
  out.normalized = true;
  return out;
}

JSAGrid apply_filter(const JSAGrid& jsa,
                     const std::vector<FilterSpec>& filters) {
  jsa.validate();
  if (!jsa.normalized)
    throw DomainError("apply_filter: input grid must be normalized");
  JSAGrid out = jsa;
  for (const FilterSpec& f : filters) {
    f.validate();
    const bool on_signal = f.axis == Field::signal;
    const int n = on_signal ? jsa.grid.n_s : jsa.grid.n_i;
    const double w_lo = on_signal ? jsa.grid.omega_s(0) : jsa.grid.omega_i(0);
    const double w_hi =
        on_signal ? jsa.grid.omega_s(n - 1) : jsa.grid.omega_i(n - 1);
    if (!(f.center >= w_lo && f.center <= w_hi))
      throw FilterOffGrid("filter center " + fmt(hz_from_omega(f.center)) +
                          " Hz outside the " +
                          (on_signal ? "signal" : "idler") + " axis [" +
                          fmt(hz_from_omega(w_lo)) + ", " +
                          fmt(hz_from_omega(w_hi)) + "] Hz");
    for (int j = 0; j < n; ++j) {
      const double w = on_signal ? jsa.grid.omega_s(j) : jsa.grid.omega_i(j);
      const double det_hz = hz_from_omega(w - f.center);
      double transmission;
      if (f.kind == FilterSpec::Kind::lorentzian) {
        const double x = 2.0 * det_hz / f.fwhm_hz;
        transmission = 1.0 / (1.0 + x * x);
      } else {
        // comb transmission with the coefficient pinned by the FWHM:
        // T = 1 / (1 + Fc sin^2(pi dv / FSR)), Fc = 1/sin^2(pi FWHM/(2 FSR))
        const double sf = std::sin(pi * 0.5 * f.fwhm_hz / f.etalon_fsr_hz);
        const double Fc = 1.0 / (sf * sf);
        const double s = std::sin(pi * det_hz / f.etalon_fsr_hz);
        transmission = 1.0 / (1.0 + Fc * s * s);
      }
      const double t_amp = std::sqrt(transmission);
      if (on_signal)
        out.amp.row(j) *= t_amp;
      else
        out.amp.col(j) *= t_amp;
    }
  }
  const double total = out.intensity_sum();
  if (!(total > 0.0))
    throw NumericalFailure("apply_filter: filtered amplitude vanished");
  const double scale = 1.0 / std::sqrt(total);
  out.amp *= scale;
  out.norm_scale *= scale;
  return out;
}

Spectrum marginal(const JSAGrid& jsa, Field f) {
  if (f == Field::pump)
    throw DomainError("marginal: axis must be signal or idler");
  jsa.validate();
  if (!jsa.normalized)
    throw DomainError("marginal: input grid must be normalized");
  Spectrum out;
  const bool on_signal = f == Field::signal;
  const int n = on_signal ? jsa.grid.n_s : jsa.grid.n_i;
  const double other_step =
      on_signal ? jsa.grid.step_i() : jsa.grid.step_s();
  out.omega.resize(n);
  out.value.resize(n);
  for (int j = 0; j < n; ++j) {
    out.omega[j] = on_signal ? jsa.grid.omega_s(j) : jsa.grid.omega_i(j);
    out.value[j] = (on_signal ? jsa.amp.row(j).squaredNorm()
                              : jsa.amp.col(j).squaredNorm()) *
                   other_step;
  }
  return out;
}

Spectrum cluster_spectrum(const CrystalSpec& c, const CavitySpec& cav,
                          double span) {
  c.validate();
  cav.validate();
  if (!(span > 0.0)) throw DomainError("cluster_spectrum: span must be > 0");
  const ResonantCenters ctr = center_on_resonances(c, cav);

  // resolve each comb line with a dozen samples across the narrower line
  double step = span / 20000.0;
  for (Field f : {Field::signal, Field::idler})
    if (cav.resonant(f))
      step = std::min(step, omega_from_hz(linewidth(cav, c, f)) / 12.0);
  const int n = int(span / step) + 1;

  const double F_s = finesse(cav, Field::signal, c.length_m);
  const double F_i = finesse(cav, Field::idler, c.length_m);
  const double cF_s = 4.0 * F_s * F_s / (pi * pi);
  const double cF_i = 4.0 * F_i * F_i / (pi * pi);
  Spectrum out;
  out.omega.resize(n);
  out.value.resize(n);
  parallel_for(0, n, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      const double ws = ctr.omega_s + span * (double(j) / (n - 1) - 0.5);
      const double wi = ctr.omega_p - ws;  // cw energy conservation
      double a_s = 1.0, a_i = 1.0;
      if (cav.resonant(Field::signal)) {
        const double s = std::sin(0.5 * roundtrip_phase(cav, c, Field::signal,
                                                        ws));
        a_s = 1.0 / (1.0 + cF_s * s * s);
      }
      if (cav.resonant(Field::idler)) {
        const double s = std::sin(0.5 * roundtrip_phase(cav, c, Field::idler,
                                                        wi));
        a_i = 1.0 / (1.0 + cF_i * s * s);
      }
      const double dk = wavevector_mismatch(c, ws, wi);
      const double env = sinc(0.5 * dk * c.length_m);
      const double dp = double_pass_factor(cav, dk, c.length_m);
      out.omega[j] = ws;
      out.value[j] = a_s * a_i * env * env * dp * dp;
    }
  });
  const double peak = *std::max_element(out.value.begin(), out.value.end());
  if (peak > 0.0)
    for (double& v : out.value) v /= peak;
  return out;
}

std::vector<Cluster> find_clusters(const Spectrum& s, double threshold,
                                   double gap) {
  if (s.omega.size() != s.value.size())
    throw DomainError("find_clusters: malformed spectrum");
  std::vector<Cluster> out;
  double last_line = 0.0;
  bool open = false;
  double w_sum = 0.0, ww_sum = 0.0;
  const auto close = [&] {
    if (open && w_sum > 0.0) out.push_back({ww_sum / w_sum, w_sum});
    open = false;
    w_sum = ww_sum = 0.0;
  };
  for (size_t i = 0; i < s.omega.size(); ++i) {
    if (!(s.value[i] > threshold)) continue;
    if (open && s.omega[i] - last_line > gap) close();
    open = true;
    last_line = s.omega[i];
    w_sum += s.value[i];
    ww_sum += s.value[i] * s.omega[i];
  }
  close();
  return out;
}

double vernier_spacing(const CrystalSpec& c) {
  const double fs = fsr(c, c.model(Field::signal), c.signal_wavelength_m,
                        c.temperature_c);
  const double fi = fsr(c, c.model(Field::idler), c.idler_wavelength_m,
                        c.temperature_c);
  const double d = std::abs(fs - fi);
  if (!(d > 0.0))
    throw DomainError("vernier_spacing: fields have equal free spectral "
                      "ranges, no cluster structure");
  return fs * fi / d;
}

}  // namespace spdc
