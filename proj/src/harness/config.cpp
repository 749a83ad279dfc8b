#include "harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace simplicial::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& origin, const std::string& message) {
  throw config_error(origin.string() + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::filesystem::path& origin, const std::string& context) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key()))
      fail(origin, context + ": unknown key \"" + item.key() + "\"");
  }
}

const json& require(const json& obj, const char* key, const std::filesystem::path& origin,
                    const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, context + ": missing required key \"" + key + "\"");
  return *it;
}

double as_double(const json& value, const std::filesystem::path& origin, const std::string& context) {
  if (!value.is_number()) fail(origin, context + ": expected a number");
  return value.get<double>();
}

long as_long(const json& value, const std::filesystem::path& origin, const std::string& context) {
  if (!value.is_number_integer()) fail(origin, context + ": expected an integer");
  return value.get<long>();
}

std::string as_string(const json& value, const std::filesystem::path& origin,
                      const std::string& context) {
  if (!value.is_string()) fail(origin, context + ": expected a string");
  return value.get<std::string>();
}

ExperimentKind parse_kind(const std::string& text, const std::filesystem::path& origin) {
  if (text == "scaling_sweep") return ExperimentKind::kScalingSweep;
  if (text == "gaussian_comparison") return ExperimentKind::kGaussianComparison;
  if (text == "bimodal") return ExperimentKind::kBimodal;
  if (text == "gp_benchmark") return ExperimentKind::kGpBenchmark;
  if (text == "extra_dimensional") return ExperimentKind::kExtraDimensional;
  fail(origin, "kind: unrecognized experiment kind \"" + text + "\"");
}

ClockMode parse_clock(const std::string& text, const std::filesystem::path& origin) {
  if (text == "real") return ClockMode::kReal;
  if (text == "fixed") return ClockMode::kFixed;
  fail(origin, "clock: expected \"real\" or \"fixed\", got \"" + text + "\"");
}

TargetKind parse_target_kind(const std::string& text, const std::filesystem::path& origin) {
  if (text == "spherical") return TargetKind::kSpherical;
  if (text == "ill_conditioned_diagonal") return TargetKind::kIllConditionedDiagonal;
  if (text == "ill_conditioned_full") return TargetKind::kIllConditionedFull;
  if (text == "two_mode_mixture") return TargetKind::kTwoModeMixture;
  if (text == "gp_election") return TargetKind::kGpElection;
  fail(origin, "target.kind: unrecognized target \"" + text + "\"");
}

AlgorithmFamily parse_family(const std::string& text, const std::filesystem::path& origin,
                             const std::string& context) {
  if (text == "simplicial") return AlgorithmFamily::kSimplicial;
  if (text == "rwm") return AlgorithmFamily::kRwm;
  if (text == "mtm") return AlgorithmFamily::kMtm;
  fail(origin, context + ".family: unrecognized family \"" + text + "\"");
}

TargetSpec parse_target(const json& obj, const std::filesystem::path& origin) {
  reject_unknown_keys(obj, {"kind", "variance", "mode_offset", "dataset", "rotation_seed"},
                      origin, "target");
  TargetSpec spec;
  spec.kind = parse_target_kind(as_string(require(obj, "kind", origin, "target"), origin,
                                          "target.kind"),
                                origin);
  if (obj.contains("variance")) {
    spec.variance = as_double(obj["variance"], origin, "target.variance");
    if (!(spec.variance > 0.0)) fail(origin, "target.variance: must be positive");
  }
  if (obj.contains("mode_offset")) {
    spec.mode_offset = as_double(obj["mode_offset"], origin, "target.mode_offset");
    if (!(spec.mode_offset > 0.0)) fail(origin, "target.mode_offset: must be positive");
  }
  if (obj.contains("dataset"))
    spec.dataset = as_string(obj["dataset"], origin, "target.dataset");
  if (obj.contains("rotation_seed")) {
    const long seed = as_long(obj["rotation_seed"], origin, "target.rotation_seed");
    if (seed < 0) fail(origin, "target.rotation_seed: must be non-negative");
    spec.rotation_seed = static_cast<std::uint64_t>(seed);
  }
  if (spec.kind == TargetKind::kGpElection && spec.dataset.empty())
    fail(origin, "target.dataset: required for gp_election targets");
  return spec;
}

AlgorithmSpec parse_algorithm(const json& obj, std::size_t index,
                              const std::filesystem::path& origin) {
  const std::string context = "algorithms[" + std::to_string(index) + "]";
  reject_unknown_keys(obj,
                      {"label", "family", "preconditioned", "gaussian_scaled",
                       "target_acceptance", "scale", "n_tries", "proposal_count"},
                      origin, context);
  AlgorithmSpec spec;
  spec.label = as_string(require(obj, "label", origin, context), origin, context + ".label");
  if (spec.label.empty()) fail(origin, context + ".label: must be non-empty");
  spec.family = parse_family(as_string(require(obj, "family", origin, context), origin,
                                       context + ".family"),
                             origin, context);
  if (obj.contains("preconditioned")) {
    if (!obj["preconditioned"].is_boolean())
      fail(origin, context + ".preconditioned: expected a boolean");
    spec.preconditioned = obj["preconditioned"].get<bool>();
  }
  if (obj.contains("gaussian_scaled")) {
    if (!obj["gaussian_scaled"].is_boolean())
      fail(origin, context + ".gaussian_scaled: expected a boolean");
    spec.gaussian_scaled = obj["gaussian_scaled"].get<bool>();
    if (spec.gaussian_scaled && spec.family != AlgorithmFamily::kSimplicial)
      fail(origin, context + ": gaussian_scaled only applies to the simplicial family");
  }
  bool explicit_auto = false;
  if (obj.contains("target_acceptance")) {
    const json& rate = obj["target_acceptance"];
    if (rate.is_string()) {
      if (rate.get<std::string>() != "auto")
        fail(origin, context + ".target_acceptance: expected a number in (0, 1) or \"auto\"");
      if (spec.family != AlgorithmFamily::kSimplicial)
        fail(origin, context + ".target_acceptance: \"auto\" only applies to the simplicial "
                               "family (dimension-keyed default curve)");
      explicit_auto = true;
    } else {
      const double value = as_double(rate, origin, context + ".target_acceptance");
      if (!(value > 0.0 && value < 1.0))
        fail(origin, context + ".target_acceptance: must lie in (0, 1)");
      spec.target_acceptance = value;
    }
  }
  if (obj.contains("scale")) {
    const json& scale = obj["scale"];
    if (scale.is_string()) {
      if (scale.get<std::string>() != "optimal")
        fail(origin, context + ".scale: expected a positive number or \"optimal\"");
      if (spec.family == AlgorithmFamily::kSimplicial)
        fail(origin, context + ".scale: \"optimal\" is random-walk scaling; simplicial "
                               "entries take a numeric edge length or the acceptance curve");
      spec.optimal_scale = true;
    } else {
      const double value = as_double(scale, origin, context + ".scale");
      if (!(value > 0.0)) fail(origin, context + ".scale: must be positive");
      spec.scale = value;
    }
  }
  if ((spec.target_acceptance || explicit_auto) && (spec.scale || spec.optimal_scale))
    fail(origin, context + ": target_acceptance and scale are mutually exclusive");
  // Simplicial entries may leave both out (or say "auto"): the harness then adapts
  // toward the measured dimension-keyed optimal acceptance curve.
  if (!spec.target_acceptance && !spec.scale && !spec.optimal_scale &&
      spec.family != AlgorithmFamily::kSimplicial)
    fail(origin, context + ": one of target_acceptance or scale is required");
  if (obj.contains("n_tries")) {
    if (spec.family != AlgorithmFamily::kMtm)
      fail(origin, context + ".n_tries: only applies to the mtm family");
    const json& tries = obj["n_tries"];
    if (tries.is_string()) {
      if (tries.get<std::string>() != "dim_plus_one")
        fail(origin, context + ".n_tries: expected a positive integer or \"dim_plus_one\"");
      spec.n_tries = 0;
    } else {
      const long value = as_long(tries, origin, context + ".n_tries");
      if (value < 1) fail(origin, context + ".n_tries: must be at least 1");
      spec.n_tries = static_cast<Index>(value);
    }
  }
  if (obj.contains("proposal_count")) {
    if (spec.family != AlgorithmFamily::kSimplicial)
      fail(origin, context + ".proposal_count: only applies to the simplicial family");
    const long value = as_long(obj["proposal_count"], origin, context + ".proposal_count");
    if (value < 1) fail(origin, context + ".proposal_count: must be at least 1");
    spec.proposal_count = static_cast<Index>(value);
  }
  return spec;
}

// Sweep variants take their acceptance targets from the grid, so only the
// shape of the sampler is configurable here.
AlgorithmSpec parse_sweep_algorithm(const json& obj, std::size_t index,
                                    const std::filesystem::path& origin) {
  const std::string context = "algorithms[" + std::to_string(index) + "]";
  reject_unknown_keys(obj, {"label", "family", "preconditioned", "gaussian_scaled"}, origin,
                      context);
  AlgorithmSpec spec;
  spec.label = as_string(require(obj, "label", origin, context), origin, context + ".label");
  if (spec.label.empty()) fail(origin, context + ".label: must be non-empty");
  spec.family = parse_family(as_string(require(obj, "family", origin, context), origin,
                                       context + ".family"),
                             origin, context);
  if (spec.family != AlgorithmFamily::kSimplicial)
    fail(origin, context + ": scaling sweeps only run simplicial variants");
  if (obj.contains("preconditioned")) {
    if (!obj["preconditioned"].is_boolean())
      fail(origin, context + ".preconditioned: expected a boolean");
    spec.preconditioned = obj["preconditioned"].get<bool>();
  }
  if (obj.contains("gaussian_scaled")) {
    if (!obj["gaussian_scaled"].is_boolean())
      fail(origin, context + ".gaussian_scaled: expected a boolean");
    spec.gaussian_scaled = obj["gaussian_scaled"].get<bool>();
  }
  return spec;
}

VisualizationSpec parse_visualization(const json& obj, const std::filesystem::path& origin) {
  reject_unknown_keys(obj, {"proposals", "edge_length", "start", "steps"}, origin,
                      "visualization");
  VisualizationSpec spec;
  if (obj.contains("proposals")) {
    const long value = as_long(obj["proposals"], origin, "visualization.proposals");
    if (value < 2) fail(origin, "visualization.proposals: must be at least 2");
    spec.proposals = static_cast<Index>(value);
  }
  if (obj.contains("edge_length")) {
    spec.edge_length = as_double(obj["edge_length"], origin, "visualization.edge_length");
    if (!(spec.edge_length > 0.0)) fail(origin, "visualization.edge_length: must be positive");
  }
  if (obj.contains("start")) {
    const json& start = obj["start"];
    if (!start.is_array() || start.size() != 2)
      fail(origin, "visualization.start: expected two coordinates");
    spec.start = {as_double(start[0], origin, "visualization.start[0]"),
                  as_double(start[1], origin, "visualization.start[1]")};
  }
  if (obj.contains("steps")) {
    spec.steps = as_long(obj["steps"], origin, "visualization.steps");
    if (spec.steps < 1) fail(origin, "visualization.steps: must be at least 1");
  }
  return spec;
}

AccuracySpec parse_accuracy(const json& obj, const std::filesystem::path& origin) {
  reject_unknown_keys(obj, {"proposals", "dimension", "gaussian", "mixture", "mixture_offset"},
                      origin, "accuracy");
  AccuracySpec spec;
  if (obj.contains("proposals")) {
    const long value = as_long(obj["proposals"], origin, "accuracy.proposals");
    if (value < 2) fail(origin, "accuracy.proposals: must be at least 2");
    spec.proposals = static_cast<Index>(value);
  }
  if (obj.contains("dimension")) {
    spec.dimension = as_long(obj["dimension"], origin, "accuracy.dimension");
    if (spec.dimension < 1) fail(origin, "accuracy.dimension: must be at least 1");
  }
  if (obj.contains("gaussian")) {
    if (!obj["gaussian"].is_boolean()) fail(origin, "accuracy.gaussian: expected a boolean");
    spec.gaussian = obj["gaussian"].get<bool>();
  }
  if (obj.contains("mixture")) {
    if (!obj["mixture"].is_boolean()) fail(origin, "accuracy.mixture: expected a boolean");
    spec.mixture = obj["mixture"].get<bool>();
  }
  if (obj.contains("mixture_offset")) {
    spec.mixture_offset = as_double(obj["mixture_offset"], origin, "accuracy.mixture_offset");
    if (!(spec.mixture_offset > 0.0)) fail(origin, "accuracy.mixture_offset: must be positive");
  }
  if (!spec.gaussian && !spec.mixture)
    fail(origin, "accuracy: at least one of gaussian or mixture must run");
  if (spec.proposals < spec.dimension)
    fail(origin, "accuracy.proposals: must be at least the dimension");
  return spec;
}

}  // namespace

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kScalingSweep: return "scaling_sweep";
    case ExperimentKind::kGaussianComparison: return "gaussian_comparison";
    case ExperimentKind::kBimodal: return "bimodal";
    case ExperimentKind::kGpBenchmark: return "gp_benchmark";
    case ExperimentKind::kExtraDimensional: return "extra_dimensional";
  }
  throw impossible_state_error("kind_name: unhandled experiment kind");
}

const char* clock_name(ClockMode mode) {
  return mode == ClockMode::kReal ? "real" : "fixed";
}

const char* target_name(TargetKind kind) {
  switch (kind) {
    case TargetKind::kSpherical: return "spherical";
    case TargetKind::kIllConditionedDiagonal: return "ill_conditioned_diagonal";
    case TargetKind::kIllConditionedFull: return "ill_conditioned_full";
    case TargetKind::kTwoModeMixture: return "two_mode_mixture";
    case TargetKind::kGpElection: return "gp_election";
  }
  throw impossible_state_error("target_name: unhandled target kind");
}

const char* family_name(AlgorithmFamily family) {
  switch (family) {
    case AlgorithmFamily::kSimplicial: return "simplicial";
    case AlgorithmFamily::kRwm: return "rwm";
    case AlgorithmFamily::kMtm: return "mtm";
  }
  throw impossible_state_error("family_name: unhandled algorithm family");
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& origin) {
  if (!doc.is_object()) fail(origin, "top level: expected a JSON object");
  reject_unknown_keys(doc,
                      {"schema_version", "name", "kind", "seed", "iterations", "replicates",
                       "burn_in_fraction", "clock", "output", "target", "dimensions",
                       "algorithms", "acceptance_rates", "proposal_fractions", "visualization",
                       "accuracy"},
                      origin, "top level");

  ExperimentConfig config;
  config.schema_version =
      static_cast<int>(as_long(require(doc, "schema_version", origin, "top level"), origin,
                               "schema_version"));
  if (config.schema_version != 1)
    fail(origin, "schema_version: this build understands version 1 only");

  config.name = as_string(require(doc, "name", origin, "top level"), origin, "name");
  if (config.name.empty()) fail(origin, "name: must be non-empty");
  config.kind =
      parse_kind(as_string(require(doc, "kind", origin, "top level"), origin, "kind"), origin);

  const long seed = as_long(require(doc, "seed", origin, "top level"), origin, "seed");
  if (seed < 1) fail(origin, "seed: must be a positive integer");
  config.base_seed = static_cast<std::uint64_t>(seed);

  config.iterations = as_long(require(doc, "iterations", origin, "top level"), origin,
                              "iterations");
  if (config.iterations < 1) fail(origin, "iterations: must be at least 1");
  config.replicates = as_long(require(doc, "replicates", origin, "top level"), origin,
                              "replicates");
  if (config.replicates < 1) fail(origin, "replicates: must be at least 1");

  if (doc.contains("burn_in_fraction")) {
    config.burn_in_fraction = as_double(doc["burn_in_fraction"], origin, "burn_in_fraction");
    if (!(config.burn_in_fraction >= 0.0 && config.burn_in_fraction < 1.0))
      fail(origin, "burn_in_fraction: must lie in [0, 1)");
  }
  if (doc.contains("clock"))
    config.clock = parse_clock(as_string(doc["clock"], origin, "clock"), origin);

  config.output = as_string(require(doc, "output", origin, "top level"), origin, "output");
  if (config.output.empty()) fail(origin, "output: must be non-empty");

  config.target = parse_target(require(doc, "target", origin, "top level"), origin);

  const bool wants_dimensions = config.kind == ExperimentKind::kScalingSweep ||
                                config.kind == ExperimentKind::kGaussianComparison ||
                                config.kind == ExperimentKind::kBimodal;
  if (wants_dimensions) {
    const json& dims = require(doc, "dimensions", origin, "top level");
    if (!dims.is_array() || dims.empty()) fail(origin, "dimensions: expected a non-empty array");
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const long d = as_long(dims[i], origin, "dimensions[" + std::to_string(i) + "]");
      if (d < 1) fail(origin, "dimensions: entries must be positive");
      config.dimensions.push_back(d);
    }
    std::vector<long> sorted = config.dimensions;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(origin, "dimensions: entries must be distinct");
  } else if (doc.contains("dimensions")) {
    fail(origin, std::string("dimensions: not used by ") + kind_name(config.kind) +
                     " experiments");
  }

  const bool wants_algorithms = config.kind == ExperimentKind::kGaussianComparison ||
                                config.kind == ExperimentKind::kBimodal ||
                                config.kind == ExperimentKind::kGpBenchmark;
  if (wants_algorithms) {
    const json& algorithms = require(doc, "algorithms", origin, "top level");
    if (!algorithms.is_array() || algorithms.empty())
      fail(origin, "algorithms: expected a non-empty array");
    for (std::size_t i = 0; i < algorithms.size(); ++i)
      config.algorithms.push_back(parse_algorithm(algorithms[i], i, origin));
    if (config.kind == ExperimentKind::kGpBenchmark) {
      // The acceptance-curve default is keyed on Gaussian target dimension and
      // does not transfer to the 4-parameter GP posterior.
      for (const AlgorithmSpec& spec : config.algorithms)
        if (!spec.target_acceptance)
          fail(origin, "algorithms: gp_benchmark chains adapt their scale, so every entry "
                       "needs a numeric target_acceptance");
    }
  } else if (config.kind == ExperimentKind::kScalingSweep) {
    if (doc.contains("algorithms")) {
      const json& algorithms = doc["algorithms"];
      if (!algorithms.is_array() || algorithms.empty())
        fail(origin, "algorithms: expected a non-empty array");
      for (std::size_t i = 0; i < algorithms.size(); ++i)
        config.algorithms.push_back(parse_sweep_algorithm(algorithms[i], i, origin));
    } else {
      AlgorithmSpec plain;
      plain.label = "Simpl";
      AlgorithmSpec preconditioned;
      preconditioned.label = "PC-Simpl";
      preconditioned.preconditioned = true;
      config.algorithms = {plain, preconditioned};
    }
  } else if (doc.contains("algorithms")) {
    fail(origin, std::string("algorithms: not used by ") + kind_name(config.kind) +
                     " experiments");
  }
  if (!config.algorithms.empty()) {
    std::set<std::string> labels;
    for (const AlgorithmSpec& spec : config.algorithms)
      if (!labels.insert(spec.label).second)
        fail(origin, "algorithms: duplicate label \"" + spec.label + "\"");
  }

  if (config.kind == ExperimentKind::kScalingSweep) {
    const json& grid = require(doc, "acceptance_rates", origin, "top level");
    reject_unknown_keys(grid, {"count", "min", "max"}, origin, "acceptance_rates");
    config.acceptance_grid.count = static_cast<int>(
        as_long(require(grid, "count", origin, "acceptance_rates"), origin,
                "acceptance_rates.count"));
    if (config.acceptance_grid.count < 1)
      fail(origin, "acceptance_rates.count: must be at least 1");
    if (grid.contains("min"))
      config.acceptance_grid.min_rate = as_double(grid["min"], origin, "acceptance_rates.min");
    if (grid.contains("max"))
      config.acceptance_grid.max_rate = as_double(grid["max"], origin, "acceptance_rates.max");
    if (!(config.acceptance_grid.min_rate > 0.0 &&
          config.acceptance_grid.max_rate < 1.0 &&
          config.acceptance_grid.min_rate <= config.acceptance_grid.max_rate))
      fail(origin, "acceptance_rates: need 0 < min <= max < 1");
    if (config.acceptance_grid.count == 1 &&
        config.acceptance_grid.min_rate != config.acceptance_grid.max_rate)
      fail(origin, "acceptance_rates: a single rate needs min == max");
    if (doc.contains("proposal_fractions")) {
      const json& fractions = doc["proposal_fractions"];
      if (!fractions.is_array()) fail(origin, "proposal_fractions: expected an array");
      for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double f = as_double(fractions[i], origin,
                                   "proposal_fractions[" + std::to_string(i) + "]");
        if (!(f > 0.0 && f <= 1.0))
          fail(origin, "proposal_fractions: entries must lie in (0, 1]");
        config.proposal_fractions.push_back(f);
      }
    }
  } else if (doc.contains("acceptance_rates") || doc.contains("proposal_fractions")) {
    fail(origin, "acceptance_rates/proposal_fractions: only used by scaling_sweep experiments");
  }

  if (config.kind == ExperimentKind::kExtraDimensional) {
    if (doc.contains("visualization"))
      config.visualization = parse_visualization(doc["visualization"], origin);
    if (doc.contains("accuracy")) config.accuracy = parse_accuracy(doc["accuracy"], origin);
  } else if (doc.contains("visualization") || doc.contains("accuracy")) {
    fail(origin, "visualization/accuracy: only used by extra_dimensional experiments");
  }

  switch (config.kind) {
    case ExperimentKind::kScalingSweep:
      if (config.target.kind != TargetKind::kSpherical &&
          config.target.kind != TargetKind::kIllConditionedDiagonal &&
          config.target.kind != TargetKind::kIllConditionedFull)
        fail(origin, "target.kind: scaling_sweep needs a gaussian target");
      break;
    case ExperimentKind::kGaussianComparison:
      if (config.target.kind == TargetKind::kTwoModeMixture ||
          config.target.kind == TargetKind::kGpElection)
        fail(origin, "target.kind: gaussian_comparison needs a gaussian target");
      break;
    case ExperimentKind::kBimodal:
      if (config.target.kind != TargetKind::kTwoModeMixture)
        fail(origin, "target.kind: bimodal experiments need a two_mode_mixture target");
      break;
    case ExperimentKind::kGpBenchmark:
      if (config.target.kind != TargetKind::kGpElection)
        fail(origin, "target.kind: gp_benchmark needs a gp_election target");
      break;
    case ExperimentKind::kExtraDimensional:
      if (config.target.kind != TargetKind::kSpherical)
        fail(origin, "target.kind: the extra-dimensional demo runs on a spherical target");
      break;
  }

  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw config_error(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(stream);
  } catch (const json::parse_error& error) {
    throw config_error(path.string() + ": " + error.what());
  }
  return parse_config(doc, path);
}

void apply_quick(ExperimentConfig& config) {
  if (config.quick) return;
  config.quick = true;
  config.iterations = std::max(1L, config.iterations / 10);
  config.replicates = std::max(1L, config.replicates / 10);
}

nlohmann::ordered_json config_echo(const ExperimentConfig& config) {
  nlohmann::ordered_json echo;
  echo["schema_version"] = config.schema_version;
  echo["name"] = config.name;
  echo["kind"] = kind_name(config.kind);
  echo["seed"] = config.base_seed;
  echo["iterations"] = config.iterations;
  echo["replicates"] = config.replicates;
  echo["burn_in_fraction"] = config.burn_in_fraction;
  echo["clock"] = clock_name(config.clock);
  echo["quick"] = config.quick;
  echo["output"] = config.output.generic_string();

  nlohmann::ordered_json target;
  target["kind"] = target_name(config.target.kind);
  switch (config.target.kind) {
    case TargetKind::kSpherical:
      target["variance"] = config.target.variance;
      break;
    case TargetKind::kIllConditionedDiagonal:
      break;
    case TargetKind::kIllConditionedFull:
      target["rotation_seed"] =
          config.target.rotation_seed == 0 ? config.base_seed : config.target.rotation_seed;
      break;
    case TargetKind::kTwoModeMixture:
      target["mode_offset"] = config.target.mode_offset;
      break;
    case TargetKind::kGpElection:
      target["dataset"] = config.target.dataset.generic_string();
      break;
  }
  echo["target"] = target;

  if (!config.dimensions.empty()) echo["dimensions"] = config.dimensions;
  if (!config.algorithms.empty()) {
    nlohmann::ordered_json algorithms = nlohmann::ordered_json::array();
    for (const AlgorithmSpec& spec : config.algorithms) {
      nlohmann::ordered_json entry;
      entry["label"] = spec.label;
      entry["family"] = family_name(spec.family);
      entry["preconditioned"] = spec.preconditioned;
      if (spec.family == AlgorithmFamily::kSimplicial)
        entry["gaussian_scaled"] = spec.gaussian_scaled;
      if (spec.target_acceptance) entry["target_acceptance"] = *spec.target_acceptance;
      if (spec.scale) entry["scale"] = *spec.scale;
      if (spec.optimal_scale) entry["scale"] = "optimal";
      if (config.kind != ExperimentKind::kScalingSweep &&
          spec.family == AlgorithmFamily::kSimplicial && !spec.target_acceptance &&
          !spec.scale && !spec.optimal_scale)
        entry["target_acceptance"] = "auto";
      if (spec.family == AlgorithmFamily::kMtm)
        entry["n_tries"] = spec.n_tries == 0 ? nlohmann::ordered_json("dim_plus_one")
                                             : nlohmann::ordered_json(spec.n_tries);
      if (spec.family == AlgorithmFamily::kSimplicial && spec.proposal_count != 0)
        entry["proposal_count"] = spec.proposal_count;
      algorithms.push_back(entry);
    }
    echo["algorithms"] = algorithms;
  }
  if (config.kind == ExperimentKind::kScalingSweep) {
    nlohmann::ordered_json grid;
    grid["count"] = config.acceptance_grid.count;
    grid["min"] = config.acceptance_grid.min_rate;
    grid["max"] = config.acceptance_grid.max_rate;
    echo["acceptance_rates"] = grid;
    if (!config.proposal_fractions.empty())
      echo["proposal_fractions"] = config.proposal_fractions;
  }
  if (config.kind == ExperimentKind::kExtraDimensional) {
    nlohmann::ordered_json visualization;
    visualization["proposals"] = config.visualization.proposals;
    visualization["edge_length"] = config.visualization.edge_length;
    visualization["start"] = config.visualization.start;
    visualization["steps"] = config.visualization.steps;
    echo["visualization"] = visualization;
    nlohmann::ordered_json accuracy;
    accuracy["proposals"] = config.accuracy.proposals;
    accuracy["dimension"] = config.accuracy.dimension;
    accuracy["gaussian"] = config.accuracy.gaussian;
    accuracy["mixture"] = config.accuracy.mixture;
    accuracy["mixture_offset"] = config.accuracy.mixture_offset;
    echo["accuracy"] = accuracy;
  }
  return echo;
}

}  // namespace simplicial::harness
