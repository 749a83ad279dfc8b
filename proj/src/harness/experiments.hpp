#pragma once

#include <memory>

#include "harness/config.hpp"
#include "harness/results.hpp"
#include "simplicial/targets.hpp"

namespace simplicial::harness {

struct RunOptions {
  int threads = 1;
};

// Proposal scale that keeps random-walk acceptance near 0.234 on product
// targets; used wherever a config asks for "optimal".
inline double optimal_walk_scale(long dim) {
  return 2.38 / std::sqrt(static_cast<double>(dim));
}

// Seed for replicate r of an experiment; every algorithm sharing a replicate
// index also shares its random numbers.
inline std::uint64_t replicate_seed(std::uint64_t base_seed, long replicate) {
  return base_seed + static_cast<std::uint64_t>(replicate);
}

// Default target acceptance for adaptive simplicial chains, keyed on target
// dimension. Values are ESS-optimal rates measured on spherical Gaussians
// (fixed-clock sweeps, >= 10 replicates x 1e4 iterations per rate),
// interpolated in log2(dim) and flattening into the large-dimension plateau.
// Used when a comparison or bimodal config gives a simplicial algorithm
// neither target_acceptance nor scale.
double simplicial_optimal_acceptance(long dim, bool gaussian_scaled);

// Instantiate the target a config describes at the given dimension. The
// rotation of an ill-conditioned full covariance depends only on
// (rotation_seed, dim), so every chain in the experiment sees the same
// target.
std::unique_ptr<Target> make_gaussian_target(const TargetSpec& spec, long dim,
                                             std::uint64_t base_seed);

// Dispatch on config.kind; runs every chain of the experiment (possibly
// across a worker pool) and returns rows in a fixed order independent of
// completion order.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace simplicial::harness
