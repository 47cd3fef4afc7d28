#pragma once
// Scenario files: flat INI-style key-value text with units spelled out in
// the key names (length_mm, tau_ns, fwhm_ghz, ...). Sections: [crystal],
// [cavity], [pump], [grid], and zero or more [filter] blocks. Unknown keys
// are an error, not a warning, so typos cannot silently change a study.
//
// Loading resolves everything the runtime needs: the signal-axis trim when
// requested (`trim_z = auto`), the doubly resonant grid centers, the axis
// spans from the per-field free spectral ranges, the pump center on the
// resonant sum, and absolute filter centers from detunings relative to the
// centered idler or signal line.
#include <string>

#include "cavityspdc/scenario.hh"

namespace spdc {

Scenario load_scenario(const std::string& path);

// parse from text, `origin` only labels error messages
Scenario parse_scenario(const std::string& text, const std::string& origin);

}  // namespace spdc
