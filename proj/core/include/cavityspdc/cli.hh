#pragma once
// Command-line front end, callable in-process so tests can drive it without
// spawning. Exit codes: 0 success, 2 configuration or usage problems
// (bad flags, malformed scenario or data files, values outside their
// domain), 3 runtime numerical failures (non-convergence, resolution
// guards, dispersion range violations during a computation).
//
// All outputs land inside the --out directory, each written to a temp file
// and renamed into place so a crash never leaves half a file behind.
namespace spdc::cli {

int run(int argc, const char* const* argv);

}  // namespace spdc::cli
