#pragma once

#include <cmath>
#include <random>

#include "simplicial/errors.hpp"
#include "simplicial/math.hpp"

namespace simplicial {

struct SliceOptions {
  double width = 1.0;
  int max_step_out = 1000;  // per side
  int max_shrink = 200;
};

struct SliceResult {
  double value = 0;
  bool expansion_capped = false;
};

// Shrinkage stage against a fixed log level. Exposed separately so the
// boundary case (level exactly at the current density) is testable without
// stubbing the rng. The current point always lies in the slice when
// log_level <= logf(current), so shrinkage cannot hang: once the interval
// collapses onto the current point it is accepted.
template <typename LogDensity, typename Rng>
SliceResult slice_step_at_level(double current, LogDensity&& logf, double log_level,
                                const SliceOptions& opts, Rng& rng) {
  if (!(opts.width > 0)) throw invalid_argument_error("slice: width must be positive");
  std::uniform_real_distribution<double> unif(0, 1);
  double lower = current - opts.width * unif(rng);
  double upper = lower + opts.width;
  bool capped = false;
  int remaining = opts.max_step_out;
  while (logf(lower) > log_level) {
    lower -= opts.width;
    if (--remaining <= 0) {
      capped = true;
      break;
    }
  }
  remaining = opts.max_step_out;
  while (!capped && logf(upper) > log_level) {
    upper += opts.width;
    if (--remaining <= 0) {
      capped = true;
      break;
    }
  }
  if (capped) return {current, true};
  for (int trial = 0; trial < opts.max_shrink; ++trial) {
    const double candidate = lower + (upper - lower) * unif(rng);
    if (logf(candidate) >= log_level) return {candidate, false};
    if (candidate < current)
      lower = candidate;
    else
      upper = candidate;
  }
  return {current, false};
}

// Neal's univariate slice sampler: auxiliary level under the density at the
// current point, interval step-out, then shrinkage. Requires a finite
// conditional at the current point. Expansion past the step-out cap returns
// the current point unchanged, flagged for the caller to log.
template <typename LogDensity, typename Rng>
SliceResult slice_step_univariate(double current, LogDensity&& logf,
                                  const SliceOptions& opts, Rng& rng) {
  const double here = logf(current);
  if (!std::isfinite(here))
    throw invalid_argument_error("slice_step_univariate: conditional not finite at current point");
  std::uniform_real_distribution<double> unif(0, 1);
  const double log_level = here + std::log(unif(rng));
  return slice_step_at_level(current, logf, log_level, opts, rng);
}

}  // namespace simplicial
