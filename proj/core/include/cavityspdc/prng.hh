#pragma once
// Deterministic random numbers for synthetic data. SplitMix64 with the
// published mixing constants: the state advances by 0x9E3779B97F4A7C15 and
// the output is a bijective xor-shift-multiply of the counter
// (0xBF58476D1CE4E5B9, 0x94D049BB133111EB, shifts 30/27/31). Streams are
// reproducible byte for byte from the seed alone on any platform with exact
// 64-bit unsigned arithmetic; no library generator is involved.
#include <cstdint>

namespace spdc {

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with the top 53 bits
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

// Poisson draw by multiplying uniforms against exp(-mean); large means are
// split into chunks of at most 16 so the running product never underflows.
long poisson(SplitMix64& rng, double mean);

// standard normal via Box-Muller; consumes exactly two uniforms per draw so
// streams stay aligned across platforms
double gaussian(SplitMix64& rng);

}  // namespace spdc
