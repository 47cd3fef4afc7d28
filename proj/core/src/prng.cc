#include "cavityspdc/prng.hh"

#include <cmath>

#include "cavityspdc/errors.hh"

namespace spdc {

namespace {

long poisson_small(SplitMix64& rng, double mean) {
  const double limit = std::exp(-mean);
  long count = -1;
  double product = 1.0;
  do {
    product *= rng.uniform();
    ++count;
  } while (product > limit);
  return count;
}

}  // namespace

long poisson(SplitMix64& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw DomainError("poisson: mean must be finite and >= 0");
  long count = 0;
  while (mean > 16.0) {
    count += poisson_small(rng, 16.0);
    mean -= 16.0;
  }
  return count + poisson_small(rng, mean);
}

double gaussian(SplitMix64& rng) {
  // uniform() can return exactly 0; nudge it away from the log singularity
  const double u1 = std::max(rng.uniform(), 0x1.0p-53);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793 * u2);
}

}  // namespace spdc
