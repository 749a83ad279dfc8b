#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace simplicial {

// Current position with its cached log density. Kernels keep the cache
// coherent: it is always the value the target returned for exactly this
// position, so the target is evaluated once per fresh point.
struct ChainState {
  Eigen::VectorXd position;
  double log_density = 0;
  long iteration = 0;
};

// Column t of states is the chain after t transitions; column 0 is the
// start. selected_index/accepted have one entry per transition. extras is
// kernel-defined per-state bookkeeping (adapted scales, misclassification
// counts), one column per state column, rows named by extra_names.
struct ChainTrace {
  Eigen::MatrixXd states;
  std::vector<int> selected_index;
  std::vector<std::uint8_t> accepted;
  Eigen::MatrixXd extras;
  std::vector<std::string> extra_names;
  double wall_seconds = 0;
  std::uint64_t seed = 0;

  long transitions() const { return static_cast<long>(accepted.size()); }
};

}  // namespace simplicial
