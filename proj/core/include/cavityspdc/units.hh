#pragma once
// Physical constants and unit helpers shared across the library.
// All spectral quantities inside the core are angular frequencies in rad/s.
// Entry points that talk to files or to the user (CSV, scenario files, CLI)
// work in Hz, meters, seconds and convert at the boundary.
#include <numbers>

namespace spdc {

inline constexpr double c_light = 299792458.0;  // vacuum speed of light, m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double omega_from_wavelength(double lambda_m) {
  return two_pi * c_light / lambda_m;
}
inline constexpr double wavelength_from_omega(double omega) {
  return two_pi * c_light / omega;
}
inline constexpr double hz_from_omega(double omega) { return omega / two_pi; }
inline constexpr double omega_from_hz(double nu) { return two_pi * nu; }

}  // namespace spdc
