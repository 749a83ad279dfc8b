#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "harness/config.hpp"

namespace simplicial::harness {

// One chain's worth of benchmark numbers. `cell` distinguishes sweep cells
// that share an algorithm label and dimension (for example a target
// acceptance rate on the scaling grid); it stays out of the CSV, whose extra
// columns carry the same information numerically.
struct ReplicateRow {
  std::string algorithm;
  long dimension = 0;
  long replicate = 0;
  std::uint64_t seed = 0;
  long iterations = 0;
  double mean_ess = 0.0;
  double min_ess = 0.0;
  double mean_esss = 0.0;
  double min_esss = 0.0;
  double acceptance_rate = 0.0;
  double wall_seconds = 0.0;
  std::string cell;
  std::vector<std::pair<std::string, double>> extras;
};

struct ExperimentResult {
  std::string experiment;
  ExperimentKind kind = ExperimentKind::kGaussianComparison;
  nlohmann::ordered_json config;
  std::vector<ReplicateRow> rows;
  // Kind-specific derived tables (sweep optima, relative performance, demo
  // artifact index). Written verbatim into the JSON output.
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  // Extra files written next to result.json, relative name -> content.
  std::vector<std::pair<std::string, std::string>> artifacts;
};

// Shortest-round-trip decimal text for a double; deterministic across runs.
std::string format_double(double value);

// Group rows by (algorithm, dimension, cell), sorted by that key, and report
// mean, standard error (sample sd over sqrt(n), null when n == 1) and median
// of every numeric column. Unreached iterations-to-error sentinels (-1) are
// censored at the replicate's budget before aggregation so the means stay
// lower bounds instead of nonsense.
nlohmann::ordered_json compute_aggregates(const std::vector<ReplicateRow>& rows);

nlohmann::ordered_json result_document(const ExperimentResult& result);
std::string result_csv(const ExperimentResult& result);

// Writes result.json, result.csv and any artifacts under `directory`.
// Refuses to clobber existing outputs unless `force`; refuses an empty row
// set. Returns the paths written.
std::vector<std::filesystem::path> write_results(const ExperimentResult& result,
                                                 const std::filesystem::path& directory,
                                                 bool force);

// Loads a result.json produced by write_results.
nlohmann::ordered_json read_result(const std::filesystem::path& path);

// Human-readable digest of a result document.
void summarize_result(const nlohmann::ordered_json& document, std::ostream& out);

}  // namespace simplicial::harness
