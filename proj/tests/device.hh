#pragma once
// Shared fixtures: the published device loaded from the bundled scenario
// files, grid-shrinking helpers so unit tests stay fast, and comparison
// helpers with explicit absolute/relative tolerances.
#include <cmath>
#include <string>

#include "doctest.h"

#include "cavityspdc/scenario_io.hh"

#ifndef SCENARIO_DIR
#error "SCENARIO_DIR must point at the bundled scenario directory"
#endif

namespace testdev {

inline std::string scenario_path(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

// the device on the 1024^2 relaxed grid; loaded once, trim auto-calibrated
inline const spdc::Scenario& device() {
  static const spdc::Scenario sc =
      spdc::load_scenario(scenario_path("paper_device_smoke.scn"));
  return sc;
}

// same device on an n x n grid, guard relaxed so coarse grids are allowed
inline spdc::Scenario device_n(int n) {
  spdc::Scenario sc = device();
  sc.grid.n_s = n;
  sc.grid.n_i = n;
  sc.grid.relaxed_guard = true;
  return sc;
}

// wrap an arbitrary matrix as a normalized JSAGrid on a plain rectangular
// grid so the decomposition layer can be fed synthetic states
inline spdc::JSAGrid jsa_from_matrix(Eigen::MatrixXcd m) {
  spdc::JSAGrid jsa;
  jsa.grid.center_s = 1.2e15;
  jsa.grid.center_i = 1.2e15;
  jsa.grid.span_s = 1.0e10;
  jsa.grid.span_i = 1.0e10;
  jsa.grid.n_s = int(m.rows());
  jsa.grid.n_i = int(m.cols());
  jsa.grid.relaxed_guard = true;
  double measure = jsa.grid.step_s() * jsa.grid.step_i();
  double w = m.squaredNorm() * measure;
  jsa.amp = m / std::sqrt(w);
  jsa.norm_scale = 1.0 / std::sqrt(w);
  jsa.normalized = true;
  return jsa;
}

inline void check_rel(double got, double want, double tol) {
  CAPTURE(got);
  CAPTURE(want);
  CAPTURE(tol);
  CHECK(std::abs(got - want) <= tol * std::abs(want));
}

inline void check_abs(double got, double want, double tol) {
  CAPTURE(got);
  CAPTURE(want);
  CAPTURE(tol);
  CHECK(std::abs(got - want) <= tol);
}

}  // namespace testdev
