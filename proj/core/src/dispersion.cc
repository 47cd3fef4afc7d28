#include "cavityspdc/dispersion.hh"

#include <cmath>
#include <sstream>

namespace spdc {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void check_window(const SellmeierModel& m, double lam_um, double t_c) {
  if (!(lam_um >= m.lambda_min_um && lam_um <= m.lambda_max_um))
    throw OutOfRange(m.name + ": wavelength " + fmt(lam_um) +
                     " um outside validity [" + fmt(m.lambda_min_um) + ", " +
                     fmt(m.lambda_max_um) + "]");
  if (!(t_c >= m.temp_min_c && t_c <= m.temp_max_c))
    throw OutOfRange(m.name + ": temperature " + fmt(t_c) +
                     " C outside validity [" + fmt(m.temp_min_c) + ", " +
                     fmt(m.temp_max_c) + "]");
}

// cubic in inverse wavelength, coefficients for powers 0..3 of 1/l
double inv_poly(const std::array<double, 4>& p, double lam_um) {
  const double il = 1.0 / lam_um;
  return p[0] + il * (p[1] + il * (p[2] + il * p[3]));
}

}  // namespace

SellmeierModel ktp_axis_y() {
  SellmeierModel m;
  m.name = "ktp-y";
  m.A = 3.45018;
  m.B1 = 0.04341;
  m.C1 = 0.04597;
  m.B2 = 16.98825;
  m.C2 = 39.43799;
  m.therm_a = {6.2897, 6.3061, -6.0629, 2.6486};
  m.therm_b = {-0.14445, 2.2244, -3.5770, 1.3470};
  m.lambda_min_um = 0.43;
  m.lambda_max_um = 1.58;
  m.temp_min_c = 0.0;
  m.temp_max_c = 120.0;
  return m;
}

SellmeierModel ktp_axis_z() {
  SellmeierModel m;
  m.name = "ktp-z";
  m.A = 4.59423;
  m.B1 = 0.06206;
  m.C1 = 0.04763;
  m.B2 = 110.80672;
  m.C2 = 86.12171;
  m.therm_a = {9.9587, 9.9228, -8.9603, 4.1010};
  m.therm_b = {-1.1882, 10.459, -9.8136, 3.1481};
  m.lambda_min_um = 0.43;
  m.lambda_max_um = 1.58;
  m.temp_min_c = 0.0;
  m.temp_max_c = 120.0;
  return m;
}

double refractive_index(const SellmeierModel& m, double wavelength_m,
                        double temperature_c) {
  const double l = wavelength_m * 1e6;
  check_window(m, l, temperature_c);
  const double l2 = l * l;
  const double n2 = m.A + m.B1 / (l2 - m.C1) + m.B2 / (l2 - m.C2);
  if (!(n2 > 1.0))
    throw DomainError(m.name + ": Sellmeier polynomial gives n^2 = " +
                      fmt(n2) + " at " + fmt(l) + " um");
  const double dT = temperature_c - 25.0;
  const double n = std::sqrt(n2) + 1e-6 * inv_poly(m.therm_a, l) * dT +
                   1e-8 * inv_poly(m.therm_b, l) * dT * dT + m.trim;
  if (!(n > 1.0))
    throw DomainError(m.name + ": corrected index " + fmt(n) +
                      " left the physical regime");
  return n;
}

double group_index(const SellmeierModel& m, double wavelength_m,
                   double temperature_c, double rel_step) {
  if (!(rel_step > 0.0 && rel_step < 1e-2))
    throw DomainError("group_index: relative step must be in (0, 1e-2)");
  const double lp = wavelength_m * (1.0 + rel_step);
  const double lm = wavelength_m * (1.0 - rel_step);
  // the stencil endpoints are range checked inside refractive_index
  const double dndl = (refractive_index(m, lp, temperature_c) -
                       refractive_index(m, lm, temperature_c)) /
                      (lp - lm);
  return refractive_index(m, wavelength_m, temperature_c) -
         wavelength_m * dndl;
}

double CrystalSpec::design_wavelength(Field f) const {
  switch (f) {
    case Field::signal: return signal_wavelength_m;
    case Field::idler: return idler_wavelength_m;
    case Field::pump: return pump_wavelength_m();
  }
  throw DomainError("design_wavelength: bad field");
}

double CrystalSpec::pump_wavelength_m() const {
  return 1.0 / (1.0 / signal_wavelength_m + 1.0 / idler_wavelength_m);
}

void CrystalSpec::validate() const {
  if (!(length_m > 0.0)) throw DomainError("crystal: length must be > 0");
  if (!(poling_period_m > 0.0))
    throw DomainError("crystal: poling period must be > 0");
  if (!(signal_wavelength_m > 0.0 && idler_wavelength_m > 0.0))
    throw DomainError("crystal: design wavelengths must be > 0");
  // the operating point itself must sit inside each field's model window
  for (Field f : {Field::pump, Field::signal, Field::idler})
    refractive_index(model(f), design_wavelength(f), temperature_c);
}

double wavevector_mismatch(const CrystalSpec& c, double omega_s,
                           double omega_i) {
  if (!(omega_s > 0.0 && omega_i > 0.0))
    throw DomainError("wavevector_mismatch: frequencies must be > 0");
  const double omega_p = omega_s + omega_i;  // no independent pump variable
  const double kp = refractive_index(c.model(Field::pump),
                                     wavelength_from_omega(omega_p),
                                     c.temperature_c) *
                    omega_p / c_light;
  const double ks = refractive_index(c.model(Field::signal),
                                     wavelength_from_omega(omega_s),
                                     c.temperature_c) *
                    omega_s / c_light;
  const double ki = refractive_index(c.model(Field::idler),
                                     wavelength_from_omega(omega_i),
                                     c.temperature_c) *
                    omega_i / c_light;
  return kp - ks - ki + two_pi / c.poling_period_m;
}

double fsr(const CrystalSpec& c, const SellmeierModel& m, double wavelength_m,
           double temperature_c) {
  const double ng = group_index(m, wavelength_m, temperature_c);
  return c_light / (2.0 * ng * c.length_m);
}

double phase_matching_temperature(const CrystalSpec& c, double omega_p,
                                  double omega_s, double omega_i) {
  if (std::abs(omega_p - (omega_s + omega_i)) > 1e-9 * omega_p)
    throw DomainError(
        "phase_matching_temperature: omega_p must equal omega_s + omega_i");
  const auto mismatch_at = [&](double t_c) {
    CrystalSpec probe = c;
    probe.temperature_c = t_c;
    return wavevector_mismatch(probe, omega_s, omega_i);
  };
  // joint validity window of the axis models involved
  double lo = std::max(c.axis_y.temp_min_c, c.axis_z.temp_min_c);
  double hi = std::min(c.axis_y.temp_max_c, c.axis_z.temp_max_c);
  if (!(lo < hi))
    throw DomainError("phase_matching_temperature: empty temperature window");

  double t_prev = lo;
  double f_prev = mismatch_at(t_prev);
  if (f_prev == 0.0) return t_prev;
  // coarse 1 C scan for a bracket, then bisect it down to 1e-4 C
  for (double t = lo + 1.0;; t += 1.0) {
    if (t > hi) t = hi;
    const double f = mismatch_at(t);
    if (f == 0.0) return t;
    if (f_prev * f < 0.0) {
      double a = t_prev, b = t, fa = f_prev;
      while (b - a > 1e-4) {
        const double mid = 0.5 * (a + b);
        const double fm = mismatch_at(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      return 0.5 * (a + b);
    }
    t_prev = t;
    f_prev = f;
    if (t >= hi) break;
  }
  throw NoRoot("phase_matching_temperature: mismatch has no zero in [" +
               fmt(lo) + ", " + fmt(hi) + "] C");
}

double calibrate_signal_trim(const CrystalSpec& c) {
  const double ws = omega_from_wavelength(c.signal_wavelength_m);
  const double wi = omega_from_wavelength(c.idler_wavelength_m);
  const Axis sig = c.signal_axis;
  const auto mismatch_with = [&](double trim) {
    CrystalSpec probe = c;
    (sig == Axis::y ? probe.axis_y : probe.axis_z).trim = trim;
    return wavevector_mismatch(probe, ws, wi);
  };
  double trim = (sig == Axis::y ? c.axis_y : c.axis_z).trim;
  // the residual is linear in an additive trim unless other fields share the
  // axis; two Newton steps land on the root either way if one exists
  for (int pass = 0; pass < 2; ++pass) {
    const double f0 = mismatch_with(trim);
    const double h = 1e-6;
    const double slope = (mismatch_with(trim + h) - mismatch_with(trim - h)) /
                         (2.0 * h);
    if (std::abs(slope) < 1.0)
      throw DomainError(
          "calibrate_signal_trim: mismatch is insensitive to the signal trim");
    trim -= f0 / slope;
  }
  return trim;
}

}  // namespace spdc
