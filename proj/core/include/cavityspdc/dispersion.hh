#pragma once
// Refractive index, group index and quasi-phase-matching bookkeeping for a
// periodically poled crystal. Wavelengths are vacuum values in meters at the
// public interface; the Sellmeier polynomials themselves are written for
// micrometers, as published.
#include <array>
#include <string>

#include "cavityspdc/errors.hh"
#include "cavityspdc/units.hh"

namespace spdc {

// Two-pole Sellmeier plus a quadratic thermo-optic correction,
//   n0^2(l)  = A + B1/(l^2 - C1) + B2/(l^2 - C2)            l in um
//   n(l, T)  = n0(l) + a(l) dT + b(l) dT^2 + trim           dT = T - 25 C
// where a and b are cubic polynomials in 1/l. The additive trim absorbs
// coating phase and coefficient-set uncertainty at the part-per-thousand
// level; it is what gets calibrated so a device is phase matched at its
// quoted operating temperature.
struct SellmeierModel {
  std::string name;  // versioned identifier of the constant set
  double A = 0.0, B1 = 0.0, C1 = 0.0, B2 = 0.0, C2 = 0.0;
  std::array<double, 4> therm_a{};  // units of 1e-6 um^m, m = 0..3
  std::array<double, 4> therm_b{};  // units of 1e-8 um^m
  double lambda_min_um = 0.0, lambda_max_um = 0.0;
  double temp_min_c = 0.0, temp_max_c = 0.0;
  double trim = 0.0;
};

// Flux-grown KTP constant sets for the two polarization axes used by a
// type-II device, with the published thermo-optic corrections folded in.
SellmeierModel ktp_axis_y();
SellmeierModel ktp_axis_z();

// Phase index at vacuum wavelength (m) and crystal temperature (C).
// Throws OutOfRange outside the model's validity window, DomainError if the
// polynomial leaves the physical regime n > 1.
double refractive_index(const SellmeierModel& m, double wavelength_m,
                        double temperature_c);

// Group index n_g = n - lambda dn/dlambda, central difference with relative
// step h (default 1e-5; exposed so step convergence can be checked).
double group_index(const SellmeierModel& m, double wavelength_m,
                   double temperature_c, double rel_step = 1e-5);

enum class Field { pump, signal, idler };
enum class Axis { y, z };

// Geometry, poling and axis assignment of one crystal. The design
// wavelengths are the intended band centers of the downconverted pair; the
// pump wavelength follows from energy conservation.
struct CrystalSpec {
  double length_m = 0.0;
  double poling_period_m = 0.0;
  double temperature_c = 0.0;
  double signal_wavelength_m = 0.0;
  double idler_wavelength_m = 0.0;
  SellmeierModel axis_y, axis_z;
  Axis pump_axis = Axis::y;
  Axis signal_axis = Axis::z;
  Axis idler_axis = Axis::y;

  const SellmeierModel& model(Axis a) const {
    return a == Axis::y ? axis_y : axis_z;
  }
  Axis axis(Field f) const {
    return f == Field::pump ? pump_axis
                            : (f == Field::signal ? signal_axis : idler_axis);
  }
  const SellmeierModel& model(Field f) const { return model(axis(f)); }
  double design_wavelength(Field f) const;
  double pump_wavelength_m() const;
  void validate() const;  // throws DomainError on nonphysical geometry
};

// Collinear quasi-phase-matched wavevector mismatch
//   dk = k_p - k_s - k_i + 2 pi / poling_period,   k = n(omega) omega / c
// with the pump frequency pinned to omega_s + omega_i. Antisymmetric
// bookkeeping only; signs are fixed here and nowhere else.
double wavevector_mismatch(const CrystalSpec& c, double omega_s,
                           double omega_i);

// Free spectral range c / (2 n_g L) in Hz for a field at the given vacuum
// wavelength inside a monolithic cavity of the crystal's length.
double fsr(const CrystalSpec& c, const SellmeierModel& m, double wavelength_m,
           double temperature_c);

// Temperature at which the collinear mismatch vanishes for the given trio of
// frequencies. Scans the joint validity window in 1 C steps for a sign
// change, then bisects to 1e-4 C. Throws NoRoot when the mismatch does not
// change sign, DomainError when omega_p deviates from omega_s + omega_i.
double phase_matching_temperature(const CrystalSpec& c, double omega_p,
                                  double omega_s, double omega_i);

// Additive index trim on the signal-axis model that zeroes the mismatch at
// the design wavelengths and the crystal's stored temperature. Exact for an
// additive correction; found by two Newton steps on the (linear) residual.
// Throws DomainError when the mismatch is insensitive to the trim, which
// happens when all three fields share the signal axis.
double calibrate_signal_trim(const CrystalSpec& c);

}  // namespace spdc
