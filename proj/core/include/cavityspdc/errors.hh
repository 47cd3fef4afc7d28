#pragma once
// Error taxonomy. Every failure mode the library can signal is a named
// exception type so callers can distinguish bad configuration from numerical
// trouble. The CLI maps configuration and usage problems to exit code 2 and
// runtime numerical failures to exit code 3.
#include <stdexcept>
#include <string>

namespace spdc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// evaluation outside a dispersion model's pinned validity window
struct OutOfRange : Error { using Error::Error; };

// no sign change of the phase mismatch over the scanned temperature window
struct NoRoot : Error { using Error::Error; };

// round-trip power R1*R2*exp(-2 alpha L) >= 1, finesse undefined
struct DegenerateCavity : Error { using Error::Error; };

// grid step coarser than an eighth of the cavity linewidth
struct ResolutionTooCoarse : Error { using Error::Error; };

// filter center outside the frequency range of the grid axis it acts on
struct FilterOffGrid : Error { using Error::Error; };

// integration window outside the grid
struct WindowOffGrid : Error { using Error::Error; };

// eigensolver or SVD backend reported failure; never silently ignored
struct NumericalFailure : Error { using Error::Error; };

// argument outside a function's mathematical domain
struct DomainError : Error { using Error::Error; };

// iterative fit ran out of iterations without meeting the tolerance
struct NonConvergence : Error { using Error::Error; };

// data that cannot constrain a fit (flat histogram, too few points, ...)
struct DegenerateData : Error { using Error::Error; };

// pulse-length optimum sits on the boundary of a shape with no interior peak
struct NoInteriorMaximum : Error { using Error::Error; };

// scenario or CSV syntax problem; message names the file, line and field
struct ParseError : Error { using Error::Error; };

}  // namespace spdc
