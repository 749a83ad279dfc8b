#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplicial/math.hpp"

namespace simplicial::harness {

// A config that cannot be run as declared: unknown keys, missing fields,
// out-of-range values. Distinct from data errors (bad input files) for the
// CLI exit-code mapping.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  kScalingSweep,
  kGaussianComparison,
  kBimodal,
  kGpBenchmark,
  kExtraDimensional,
};

// Fixed clock charges a flat virtual microsecond per transition, which makes
// output files bitwise reproducible. Real time is the default and what any
// per-second figure should be read from.
enum class ClockMode { kReal, kFixed };

enum class TargetKind {
  kSpherical,
  kIllConditionedDiagonal,
  kIllConditionedFull,
  kTwoModeMixture,
  kGpElection,
};

enum class AlgorithmFamily { kSimplicial, kRwm, kMtm };

struct AlgorithmSpec {
  std::string label;
  AlgorithmFamily family = AlgorithmFamily::kSimplicial;
  bool preconditioned = false;   // learn a running covariance preconditioner
  bool gaussian_scaled = false;  // simplicial only: chi-square edge scaling
  // Adaptive scale toward this acceptance rate. A simplicial entry with
  // neither this nor a fixed scale adapts toward the dimension-keyed curve
  // (simplicial_optimal_acceptance).
  std::optional<double> target_acceptance;
  // Fixed scale / edge; "optimal" (rwm and mtm only) selects 2.38/sqrt(D).
  std::optional<double> scale;
  bool optimal_scale = false;
  Index n_tries = 0;         // mtm; 0 means dim + 1
  Index proposal_count = 0;  // simplicial; 0 means dim
};

struct TargetSpec {
  TargetKind kind = TargetKind::kSpherical;
  double variance = 1.0;
  double mode_offset = 5.0;            // two-mode mixture
  std::filesystem::path dataset;       // gp_election
  std::uint64_t rotation_seed = 0;     // ill-conditioned full; 0 -> base seed
};

struct AcceptanceGrid {
  int count = 0;
  double min_rate = 0.2;
  double max_rate = 0.95;
};

// Point-cloud demo walk: a handful of transitions with every proposal cloud
// dumped to disk.
struct VisualizationSpec {
  Index proposals = 1000;
  double edge_length = 200.0;
  std::vector<double> start = {10.0, 10.0};
  long steps = 3;
};

// Long extra-dimensional runs whose marginals are checked against exact
// quantiles.
struct AccuracySpec {
  Index proposals = 100;
  long dimension = 3;
  bool gaussian = true;
  bool mixture = true;
  double mixture_offset = 5.0;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string name;
  ExperimentKind kind = ExperimentKind::kGaussianComparison;
  std::uint64_t base_seed = 1;
  long iterations = 0;
  long replicates = 0;
  double burn_in_fraction = 0.2;
  ClockMode clock = ClockMode::kReal;
  std::filesystem::path output;
  TargetSpec target;
  std::vector<long> dimensions;
  std::vector<AlgorithmSpec> algorithms;
  AcceptanceGrid acceptance_grid;          // scaling sweep
  std::vector<double> proposal_fractions;  // scaling sweep sub-study
  VisualizationSpec visualization;         // extra-dimensional
  AccuracySpec accuracy;                   // extra-dimensional
  bool quick = false;                      // echoed so results say what ran
};

const char* kind_name(ExperimentKind kind);
const char* clock_name(ClockMode mode);
const char* target_name(TargetKind kind);
const char* family_name(AlgorithmFamily family);

// Parse and validate a config file. Unknown keys are rejected so typos fail
// loudly instead of silently running defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

// Same validation applied to an in-memory document (tests build these).
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& origin);

// Desk-scale preset: 10% iterations and replicates, floored at 1.
void apply_quick(ExperimentConfig& config);

// Echo of the effective config embedded in every result file.
nlohmann::ordered_json config_echo(const ExperimentConfig& config);

}  // namespace simplicial::harness
