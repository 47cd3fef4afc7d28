#pragma once
// A fully resolved parameter set for one device study: crystal, cavity,
// pump, grid and filters. Loaded from a scenario file once and treated as
// immutable afterwards; every operation takes it by const reference and
// derived quantities are recomputed rather than cached inside.
#include <string>
#include <vector>

#include "cavityspdc/dispersion.hh"
#include "cavityspdc/spectral.hh"

namespace spdc {

struct Scenario {
  std::string name;
  CrystalSpec crystal;
  CavitySpec cavity;
  PumpSpec pump;        // omega_p0 sits on the doubly resonant sum when the
                        // grid was centered on the comb
  FrequencyGrid grid;   // centers resolved at load time
  std::vector<FilterSpec> filters;

  void validate() const;
};

}  // namespace spdc
