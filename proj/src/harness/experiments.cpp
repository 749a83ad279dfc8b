#include "harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "harness/parallel.hpp"
#include "simplicial/diagnostics.hpp"
#include "simplicial/election_data.hpp"
#include "simplicial/gp_sweep.hpp"
#include "simplicial/samplers.hpp"

namespace simplicial::harness {

namespace {

// Flat virtual cost per transition under the fixed clock.
constexpr double kFixedSecondsPerIteration = 1e-6;

double effective_wall(const ChainTrace& trace, ClockMode clock) {
  if (clock == ClockMode::kFixed)
    return static_cast<double>(trace.transitions()) * kFixedSecondsPerIteration;
  // A sub-tick measurement on a tiny run would poison the per-second rates.
  return std::max(trace.wall_seconds, 1e-9);
}

long burn_in_columns(long transitions, double fraction) {
  return static_cast<long>(std::floor(fraction * static_cast<double>(transitions)));
}

// Core benchmark columns for one finished chain.
void fill_core_stats(ReplicateRow& row, const ChainTrace& trace,
                     const ExperimentConfig& config) {
  const long n = trace.transitions();
  const long burn = burn_in_columns(n, config.burn_in_fraction);
  const double wall = effective_wall(trace, config.clock);
  const EssReport report = ess_report(trace.states.middleCols(burn, n + 1 - burn), wall);
  row.iterations = n;
  row.mean_ess = report.mean_ess;
  row.min_ess = report.min_ess;
  row.mean_esss = report.mean_per_second;
  row.min_esss = report.min_per_second;
  row.acceptance_rate = acceptance_rate(trace);
  row.wall_seconds = wall;
}

double resolve_fixed_scale(const AlgorithmSpec& algorithm, long dim) {
  if (algorithm.scale) return *algorithm.scale;
  return optimal_walk_scale(dim);
}

double interpolate_by_log_dim(const std::vector<std::pair<long, double>>& anchors, long dim) {
  if (dim <= anchors.front().first) return anchors.front().second;
  if (dim >= anchors.back().first) return anchors.back().second;
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    if (dim > anchors[i].first) continue;
    const auto [d0, v0] = anchors[i - 1];
    const auto [d1, v1] = anchors[i];
    const double t = (std::log2(static_cast<double>(dim)) - std::log2(static_cast<double>(d0))) /
                     (std::log2(static_cast<double>(d1)) - std::log2(static_cast<double>(d0)));
    return v0 + t * (v1 - v0);
  }
  throw impossible_state_error("interpolate_by_log_dim: unreachable");
}

// Kernel for one chain on a plain (non-GP) target. Covariance learning for
// preconditioned variants freezes halfway through the run so the tail is
// honest Markov chain.
std::unique_ptr<Kernel> make_standard_kernel(const AlgorithmSpec& algorithm,
                                             const Target& target, long iterations,
                                             Index proposal_count,
                                             std::optional<double> acceptance_override) {
  const long dim = target.dim();
  const long freeze = std::max(1L, iterations / 2);
  const std::optional<double> adapt_to =
      acceptance_override ? acceptance_override : algorithm.target_acceptance;
  switch (algorithm.family) {
    case AlgorithmFamily::kSimplicial: {
      SimplicialKernel::Options opts;
      opts.variant = algorithm.gaussian_scaled ? SimplicialVariant::kGaussianScaled
                                               : SimplicialVariant::kVanilla;
      opts.proposal_count = proposal_count > 0 ? proposal_count : algorithm.proposal_count;
      if (adapt_to)
        opts.target_acceptance = *adapt_to;
      else if (algorithm.scale)
        opts.edge_length = *algorithm.scale;
      else
        opts.target_acceptance = simplicial_optimal_acceptance(dim, algorithm.gaussian_scaled);
      opts.adapt_covariance = algorithm.preconditioned;
      opts.covariance_freeze_after = freeze;
      return std::make_unique<SimplicialKernel>(target, opts);
    }
    case AlgorithmFamily::kRwm: {
      RwmKernel::Options opts;
      opts.scale = resolve_fixed_scale(algorithm, dim);
      if (adapt_to) opts.target_acceptance = *adapt_to;
      opts.adapt_covariance = algorithm.preconditioned;
      opts.covariance_freeze_after = freeze;
      return std::make_unique<RwmKernel>(target, opts);
    }
    case AlgorithmFamily::kMtm: {
      MtmKernel::Options opts;
      opts.n_tries = algorithm.n_tries;
      opts.scale = resolve_fixed_scale(algorithm, dim);
      if (adapt_to) opts.target_acceptance = *adapt_to;
      opts.adapt_covariance = algorithm.preconditioned;
      opts.covariance_freeze_after = freeze;
      return std::make_unique<MtmKernel>(target, opts);
    }
  }
  throw impossible_state_error("make_standard_kernel: unhandled family");
}

double mean_over(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double median_over(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double extra_value(const ReplicateRow& row, const std::string& name) {
  for (const auto& [key, value] : row.extras)
    if (key == name) return value;
  throw impossible_state_error("extra_value: missing column " + name);
}

// ---------------------------------------------------------------------------
// Scaling sweep: adaptive simplicial variants across a grid of target
// acceptance rates, plus an optional sub-simplex study with fewer proposals
// than dimensions.

struct SweepCell {
  std::size_t algorithm = 0;
  long dimension = 0;
  double target_acceptance = 0.0;
  Index proposal_count = 0;
  bool grid = true;  // false for the proposal-count study
};

ExperimentResult run_scaling_sweep(const ExperimentConfig& config, const RunOptions& options) {
  std::vector<double> rates;
  const AcceptanceGrid& grid = config.acceptance_grid;
  if (grid.count == 1) {
    rates.push_back(grid.min_rate);
  } else {
    for (int i = 0; i < grid.count; ++i)
      rates.push_back(grid.min_rate + (grid.max_rate - grid.min_rate) * i / (grid.count - 1));
  }

  std::vector<SweepCell> cells;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (long dim : config.dimensions) {
      for (double rate : rates)
        cells.push_back({a, dim, rate, static_cast<Index>(dim), true});
      std::set<Index> seen;
      for (double fraction : config.proposal_fractions) {
        const Index p = std::clamp<Index>(
            static_cast<Index>(std::lround(fraction * static_cast<double>(dim))), 1,
            static_cast<Index>(dim));
        if (!seen.insert(p).second) continue;
        // A sub-simplex with p proposals can never accept more often than
        // p/(p+1), so the study pins its target safely below that ceiling.
        const double ceiling = static_cast<double>(p) / static_cast<double>(p + 1);
        cells.push_back({a, dim, std::min(0.675, ceiling - 0.05), p, false});
      }
    }
  }

  const long jobs = static_cast<long>(cells.size()) * config.replicates;
  ExperimentResult result;
  result.rows.resize(static_cast<std::size_t>(jobs));
  parallel_for(jobs, options.threads, [&](long j) {
    const SweepCell& cell = cells[static_cast<std::size_t>(j / config.replicates)];
    const long replicate = j % config.replicates;
    const AlgorithmSpec& algorithm = config.algorithms[cell.algorithm];

    const std::unique_ptr<Target> target =
        make_gaussian_target(config.target, cell.dimension, config.base_seed);
    const std::unique_ptr<Kernel> kernel = make_standard_kernel(
        algorithm, *target, config.iterations, cell.proposal_count, cell.target_acceptance);
    const ChainTrace trace =
        run_chain(*kernel, *target, config.iterations,
                  Eigen::VectorXd::Zero(cell.dimension),
                  replicate_seed(config.base_seed, replicate));

    ReplicateRow& row = result.rows[static_cast<std::size_t>(j)];
    row.algorithm = algorithm.label;
    row.dimension = cell.dimension;
    row.replicate = replicate;
    row.seed = trace.seed;
    fill_core_stats(row, trace, config);
    row.cell = (cell.grid ? "ta=" : "P=") +
               (cell.grid ? format_double(cell.target_acceptance)
                          : std::to_string(cell.proposal_count));
    row.extras = {{"target_acceptance", cell.target_acceptance},
                  {"edge_length", trace.extras(0, trace.transitions())},
                  {"proposal_count", static_cast<double>(cell.proposal_count)}};
  });

  // ESS-maximizing grid cell per (variant, dimension).
  nlohmann::ordered_json optima = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (long dim : config.dimensions) {
      double best_mean_ess = -1.0;
      nlohmann::ordered_json best;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const SweepCell& cell = cells[c];
        if (!cell.grid || cell.algorithm != a || cell.dimension != dim) continue;
        std::vector<double> ess, acceptance, edge;
        for (long r = 0; r < config.replicates; ++r) {
          const ReplicateRow& row =
              result.rows[static_cast<std::size_t>(c) * config.replicates + r];
          ess.push_back(row.mean_ess);
          acceptance.push_back(row.acceptance_rate);
          edge.push_back(extra_value(row, "edge_length"));
        }
        const double cell_ess = mean_over(ess);
        if (cell_ess > best_mean_ess) {
          best_mean_ess = cell_ess;
          best = {{"algorithm", config.algorithms[a].label},
                  {"dimension", dim},
                  {"target_acceptance", cell.target_acceptance},
                  {"realized_acceptance", mean_over(acceptance)},
                  {"edge_length", mean_over(edge)},
                  {"mean_ess", cell_ess}};
        }
      }
      optima.push_back(best);
    }
  }
  result.summary["optima"] = optima;

  if (!config.proposal_fractions.empty()) {
    nlohmann::ordered_json study = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const SweepCell& cell = cells[c];
      if (cell.grid) continue;
      std::vector<double> ess;
      for (long r = 0; r < config.replicates; ++r)
        ess.push_back(result.rows[static_cast<std::size_t>(c) * config.replicates + r].mean_ess);
      study.push_back({{"algorithm", config.algorithms[cell.algorithm].label},
                       {"dimension", cell.dimension},
                       {"proposal_count", cell.proposal_count},
                       {"target_acceptance", cell.target_acceptance},
                       {"mean_ess", mean_over(ess)}});
    }
    result.summary["proposal_study"] = study;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Gaussian comparison: fixed algorithm roster across dimensions, plus
// replicate-paired relative performance of simplicial variants against each
// baseline.

ExperimentResult run_gaussian_comparison(const ExperimentConfig& config,
                                         const RunOptions& options) {
  struct JobKey {
    std::size_t algorithm;
    long dimension;
  };
  std::vector<JobKey> keys;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    for (long dim : config.dimensions) keys.push_back({a, dim});

  const long jobs = static_cast<long>(keys.size()) * config.replicates;
  ExperimentResult result;
  result.rows.resize(static_cast<std::size_t>(jobs));
  parallel_for(jobs, options.threads, [&](long j) {
    const JobKey& key = keys[static_cast<std::size_t>(j / config.replicates)];
    const long replicate = j % config.replicates;
    const AlgorithmSpec& algorithm = config.algorithms[key.algorithm];

    const std::unique_ptr<Target> target =
        make_gaussian_target(config.target, key.dimension, config.base_seed);
    const std::unique_ptr<Kernel> kernel =
        make_standard_kernel(algorithm, *target, config.iterations, 0, std::nullopt);
    const ChainTrace trace =
        run_chain(*kernel, *target, config.iterations, Eigen::VectorXd::Zero(key.dimension),
                  replicate_seed(config.base_seed, replicate));

    ReplicateRow& row = result.rows[static_cast<std::size_t>(j)];
    row.algorithm = algorithm.label;
    row.dimension = key.dimension;
    row.replicate = replicate;
    row.seed = trace.seed;
    fill_core_stats(row, trace, config);
  });

  auto rows_for = [&](std::size_t algorithm, long dim) {
    std::vector<const ReplicateRow*> out;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (keys[k].algorithm != algorithm || keys[k].dimension != dim) continue;
      for (long r = 0; r < config.replicates; ++r)
        out.push_back(&result.rows[k * static_cast<std::size_t>(config.replicates) +
                                   static_cast<std::size_t>(r)]);
    }
    return out;
  };

  nlohmann::ordered_json relative = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    if (config.algorithms[a].family != AlgorithmFamily::kSimplicial) continue;
    for (std::size_t b = 0; b < config.algorithms.size(); ++b) {
      if (config.algorithms[b].family == AlgorithmFamily::kSimplicial) continue;
      for (long dim : config.dimensions) {
        const auto numerator = rows_for(a, dim);
        const auto denominator = rows_for(b, dim);
        std::vector<double> rel_mean, rel_min, rel_mean_s, rel_min_s;
        for (long r = 0; r < config.replicates; ++r) {
          rel_mean.push_back(numerator[r]->mean_ess / denominator[r]->mean_ess);
          rel_min.push_back(numerator[r]->min_ess / denominator[r]->min_ess);
          rel_mean_s.push_back(numerator[r]->mean_esss / denominator[r]->mean_esss);
          rel_min_s.push_back(numerator[r]->min_esss / denominator[r]->min_esss);
        }
        relative.push_back({{"algorithm", config.algorithms[a].label},
                            {"baseline", config.algorithms[b].label},
                            {"dimension", dim},
                            {"median_rel_mean_ess", median_over(rel_mean)},
                            {"median_rel_min_ess", median_over(rel_min)},
                            {"median_rel_mean_esss", median_over(rel_mean_s)},
                            {"median_rel_min_esss", median_over(rel_min_s)}});
      }
    }
  }
  result.summary["relative_performance"] = relative;
  return result;
}

// ---------------------------------------------------------------------------
// Bimodal study: intermodal jump counts on a symmetric two-mode mixture.

ExperimentResult run_bimodal(const ExperimentConfig& config, const RunOptions& options) {
  struct JobKey {
    std::size_t algorithm;
    long dimension;
  };
  std::vector<JobKey> keys;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    for (long dim : config.dimensions) keys.push_back({a, dim});

  const long jobs = static_cast<long>(keys.size()) * config.replicates;
  ExperimentResult result;
  result.rows.resize(static_cast<std::size_t>(jobs));
  parallel_for(jobs, options.threads, [&](long j) {
    const JobKey& key = keys[static_cast<std::size_t>(j / config.replicates)];
    const long replicate = j % config.replicates;
    const AlgorithmSpec& algorithm = config.algorithms[key.algorithm];

    const MixtureTarget target(two_mode_mixture(key.dimension, config.target.mode_offset));
    const std::unique_ptr<Kernel> kernel =
        make_standard_kernel(algorithm, target, config.iterations, 0, std::nullopt);
    // Starts in the first mode; jumps are counted over the whole trace.
    const ChainTrace trace =
        run_chain(*kernel, target, config.iterations, Eigen::VectorXd::Zero(key.dimension),
                  replicate_seed(config.base_seed, replicate));

    ReplicateRow& row = result.rows[static_cast<std::size_t>(j)];
    row.algorithm = algorithm.label;
    row.dimension = key.dimension;
    row.replicate = replicate;
    row.seed = trace.seed;
    fill_core_stats(row, trace, config);
    row.extras = {{"jumps", static_cast<double>(intermodal_jumps(trace, target.mode_centers()))}};
  });
  return result;
}

// ---------------------------------------------------------------------------
// GP classification benchmark: latent field plus hyperparameter sweeps on the
// election data, every chain starting from the all-states-wrong corner.

ExperimentResult run_gp_benchmark(const ExperimentConfig& config, const RunOptions& options) {
  const ElectionDataset dataset = load_election_csv(config.target.dataset);
  const long dim = dataset.labels.size();

  Eigen::VectorXd start(dim);
  for (long i = 0; i < dim; ++i) start(i) = dataset.labels(i) == 1 ? -1.0 : 1.0;

  const long jobs = static_cast<long>(config.algorithms.size()) * config.replicates;
  ExperimentResult result;
  result.rows.resize(static_cast<std::size_t>(jobs));
  parallel_for(jobs, options.threads, [&](long j) {
    const AlgorithmSpec& algorithm =
        config.algorithms[static_cast<std::size_t>(j / config.replicates)];
    const long replicate = j % config.replicates;

    GpSweepKernel::Options opts;
    switch (algorithm.family) {
      case AlgorithmFamily::kSimplicial:
        opts.family = GpSweepKernel::LatentFamily::kSimplicial;
        break;
      case AlgorithmFamily::kRwm:
        opts.family = GpSweepKernel::LatentFamily::kRwm;
        break;
      case AlgorithmFamily::kMtm:
        opts.family = GpSweepKernel::LatentFamily::kMtm;
        break;
    }
    opts.target_acceptance = *algorithm.target_acceptance;
    opts.adapt_covariance = algorithm.preconditioned;
    opts.covariance_freeze_after = std::max(1L, config.iterations / 2);
    opts.n_tries = algorithm.n_tries;
    GpSweepKernel kernel(GpClassificationModel(dataset.predictors, dataset.labels), opts);
    const ChainTrace trace = run_chain(kernel, kernel.target(), config.iterations, start,
                                       replicate_seed(config.base_seed, replicate));

    ReplicateRow& row = result.rows[static_cast<std::size_t>(j)];
    row.algorithm = algorithm.label;
    row.dimension = dim;
    row.replicate = replicate;
    row.seed = trace.seed;
    fill_core_stats(row, trace, config);

    const long n = trace.transitions();
    const long burn = burn_in_columns(n, config.burn_in_fraction);
    row.extras.reserve(6);
    for (Index h = 0; h < 4; ++h) {
      double ess = 1.0;
      try {
        ess = effective_sample_size(
            trace.extras.row(h).segment(burn, n + 1 - burn).transpose());
      } catch (const undefined_ess_error&) {
      }
      row.extras.emplace_back(std::string("ess_") + gp_hyper_name(static_cast<int>(h)), ess);
    }
    const Eigen::VectorXd errors = trace.extras.row(4).transpose();
    const std::vector<double> error_series(errors.data(), errors.data() + errors.size());
    const std::optional<long> hit = first_iteration_below(error_series, 10.0);
    const double its = hit ? static_cast<double>(*hit) : -1.0;
    const double secs =
        hit ? static_cast<double>(*hit) * row.wall_seconds / static_cast<double>(n) : -1.0;
    row.extras.emplace_back("its_to_err10", its);
    row.extras.emplace_back("secs_to_err10", secs);
  });
  return result;
}

// ---------------------------------------------------------------------------
// Extra-dimensional demo: point-cloud snapshots of a many-vertex proposal
// simplex in the plane, plus long marginal-accuracy runs checked against
// exact quantiles.

double mixture_marginal_quantile(double p, double offset) {
  double lo = -12.0;
  double hi = offset + 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * normal_cdf(mid) + 0.5 * normal_cdf(mid - offset);
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void append_point(std::string& csv, const char* kind, double x, double y) {
  csv += kind;
  csv += ',';
  csv += format_double(x);
  csv += ',';
  csv += format_double(y);
  csv += '\n';
}

ExperimentResult run_extra_dimensional(const ExperimentConfig& config,
                                       const RunOptions& options) {
  ExperimentResult result;

  // Point-cloud walk. The simplex lives in P dimensions; candidates are the
  // image of its vertices under a Haar frame, the current point sitting on
  // the vertex pinned at the origin. The same vertices pushed through the
  // canonical embedding (no rotation) collapse in the plane: all but two
  // nonzero vertices share their first two coordinates exactly.
  const VisualizationSpec& vis = config.visualization;
  const GaussianTarget demo_target(GaussianSpec::spherical(2, config.target.variance));
  const SimplexVertexSet<double> base = regular_simplex(vis.proposals, 1.0);
  const Index candidates = base.vertex_count();

  RngEngine demo_rng(config.base_seed);
  Eigen::Vector2d position(vis.start[0], vis.start[1]);
  double position_density = demo_target.log_density(position);

  long coincident = 0;
  nlohmann::ordered_json step_files = nlohmann::ordered_json::array();
  for (long step = 0; step < vis.steps; ++step) {
    std::string csv = "kind,x,y\n";
    append_point(csv, "initial", position(0), position(1));

    std::map<std::pair<double, double>, long> multiplicity;
    for (Index v = 0; v < candidates; ++v) {
      const double x = position(0) + vis.edge_length * base.vertices(0, v);
      const double y = position(1) + vis.edge_length * base.vertices(1, v);
      append_point(csv, "unrotated", x, y);
      if (step == 0) ++multiplicity[{x, y}];
    }
    for (const auto& item : multiplicity) coincident = std::max(coincident, item.second);

    const Eigen::MatrixXd frame =
        haar_frame_rows<double>(2, vis.proposals, demo_rng);
    Eigen::MatrixXd cloud = vis.edge_length * (frame * base.vertices);
    cloud.colwise() += position;
    cloud.col(candidates - 1) = position;  // origin vertex carries the chain

    Eigen::VectorXd log_density(candidates);
    for (Index v = 0; v < candidates - 1; ++v) log_density(v) = demo_target.log_density(cloud.col(v));
    log_density(candidates - 1) = position_density;
    for (Index v = 0; v < candidates; ++v)
      append_point(csv, "proposal", cloud(0, v), cloud(1, v));

    const Index selected = select_index(log_density, demo_rng);
    position = cloud.col(selected);
    position_density = log_density(selected);
    append_point(csv, "accepted", position(0), position(1));

    const std::string name = "points_step" + std::to_string(step) + ".csv";
    result.artifacts.emplace_back(name, std::move(csv));
    step_files.push_back(name);
  }
  result.summary["visualization"] = {{"proposals", vis.proposals},
                                     {"edge_length", vis.edge_length},
                                     {"start", vis.start},
                                     {"coincident_unrotated_projections", coincident},
                                     {"files", step_files}};

  // Marginal accuracy runs.
  const AccuracySpec& accuracy = config.accuracy;
  struct AccuracyJob {
    const char* name;
    bool mixture;
  };
  std::vector<AccuracyJob> jobs;
  if (accuracy.gaussian) jobs.push_back({"gaussian", false});
  if (accuracy.mixture) jobs.push_back({"mixture", true});

  struct AccuracyOutput {
    ReplicateRow row;
    std::string qq_csv;
    nlohmann::ordered_json correlations;
    long jumps = 0;
  };
  std::vector<AccuracyOutput> outputs(jobs.size());

  parallel_for(static_cast<long>(jobs.size()), options.threads, [&](long j) {
    const AccuracyJob& job = jobs[static_cast<std::size_t>(j)];
    const long dim = accuracy.dimension;

    std::unique_ptr<Target> target;
    if (job.mixture)
      target = std::make_unique<MixtureTarget>(
          two_mode_mixture(dim, accuracy.mixture_offset));
    else
      target = std::make_unique<GaussianTarget>(GaussianSpec::spherical(dim));

    SimplicialKernel::Options opts;
    opts.variant = SimplicialVariant::kExtraDimensional;
    opts.proposal_count = accuracy.proposals;
    opts.target_acceptance = 0.675;
    SimplicialKernel kernel(*target, opts);
    const ChainTrace trace = run_chain(kernel, *target, config.iterations,
                                       Eigen::VectorXd::Zero(dim), config.base_seed);

    AccuracyOutput& out = outputs[static_cast<std::size_t>(j)];
    out.row.algorithm = "XD-Simpl";
    out.row.dimension = dim;
    out.row.replicate = 0;
    out.row.seed = trace.seed;
    fill_core_stats(out.row, trace, config);
    out.row.cell = std::string("target=") + job.name;

    if (job.mixture)
      out.jumps = intermodal_jumps(
          trace, static_cast<const MixtureTarget&>(*target).mode_centers());

    auto reference = [&](double p) {
      return job.mixture ? mixture_marginal_quantile(p, accuracy.mixture_offset)
                         : normal_quantile(p);
    };

    const long n = trace.transitions();
    const long burn = burn_in_columns(n, config.burn_in_fraction);
    out.qq_csv = "coordinate,sample_quantile,reference_quantile\n";
    out.correlations = nlohmann::ordered_json::array();
    double min_correlation = 1.0;
    for (long coord = 0; coord < dim; ++coord) {
      const Eigen::VectorXd coord_samples =
          trace.states.row(coord).segment(burn, n + 1 - burn).transpose();
      std::vector<double> samples(coord_samples.data(),
                                  coord_samples.data() + coord_samples.size());
      const auto points = qq_points(std::move(samples), reference);
      const std::optional<double> correlation = qq_correlation(points);
      const double r = correlation.value_or(0.0);
      min_correlation = std::min(min_correlation, r);
      out.correlations.push_back(r);
      // Thin the plotting artifact; the correlation above used every point.
      const std::size_t stride = std::max<std::size_t>(1, points.size() / 2000);
      for (std::size_t i = 0; i < points.size(); i += stride) {
        out.qq_csv += std::to_string(coord);
        out.qq_csv += ',';
        out.qq_csv += format_double(points[i].first);
        out.qq_csv += ',';
        out.qq_csv += format_double(points[i].second);
        out.qq_csv += '\n';
      }
    }
    out.row.extras = {{"qq_correlation_min", min_correlation},
                      {"jumps", static_cast<double>(out.jumps)}};
  });

  nlohmann::ordered_json accuracy_summary = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    result.rows.push_back(outputs[j].row);
    const std::string name = std::string("qq_") + jobs[j].name + ".csv";
    result.artifacts.emplace_back(name, std::move(outputs[j].qq_csv));
    nlohmann::ordered_json entry;
    entry["target"] = jobs[j].name;
    entry["file"] = name;
    entry["qq_correlations"] = outputs[j].correlations;
    if (jobs[j].mixture) entry["intermodal_jumps"] = outputs[j].jumps;
    accuracy_summary.push_back(entry);
  }
  result.summary["accuracy"] = accuracy_summary;
  return result;
}

}  // namespace

double simplicial_optimal_acceptance(long dim, bool gaussian_scaled) {
  // Anchors rise toward the plateau near 0.675; dimensions between anchors
  // interpolate, dimensions past the last anchor stay on the plateau. The
  // gaussian-scaled variant wants looser targets at very low dimension (its
  // chi-square edge scaling already spreads the proposals) and rejoins the
  // vanilla curve by dim 8.
  static const std::vector<std::pair<long, double>> vanilla = {
      {2, 0.25}, {3, 0.30}, {4, 0.30},  {8, 0.35},
      {16, 0.40}, {32, 0.55}, {64, 0.55}, {256, 0.675}};
  static const std::vector<std::pair<long, double>> scaled = {
      {2, 0.30}, {3, 0.35}, {4, 0.40},  {8, 0.35},
      {16, 0.40}, {32, 0.55}, {64, 0.55}, {256, 0.675}};
  return interpolate_by_log_dim(gaussian_scaled ? scaled : vanilla, dim);
}

std::unique_ptr<Target> make_gaussian_target(const TargetSpec& spec, long dim,
                                             std::uint64_t base_seed) {
  switch (spec.kind) {
    case TargetKind::kSpherical:
      return std::make_unique<GaussianTarget>(GaussianSpec::spherical(dim, spec.variance));
    case TargetKind::kIllConditionedDiagonal:
      return std::make_unique<GaussianTarget>(GaussianSpec::ill_conditioned_diagonal(dim));
    case TargetKind::kIllConditionedFull: {
      const std::uint64_t seed = spec.rotation_seed == 0 ? base_seed : spec.rotation_seed;
      RngEngine rng(seed + 1000003ULL * static_cast<std::uint64_t>(dim));
      return std::make_unique<GaussianTarget>(GaussianSpec::ill_conditioned_full(dim, rng));
    }
    case TargetKind::kTwoModeMixture:
      return std::make_unique<MixtureTarget>(two_mode_mixture(dim, spec.mode_offset));
    case TargetKind::kGpElection:
      break;
  }
  throw invalid_argument_error("make_gaussian_target: target has no gaussian closed form");
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  // Diagnostics need a handful of post-burn states no matter the preset.
  const long post_burn =
      config.iterations + 1 - burn_in_columns(config.iterations, config.burn_in_fraction);
  if (post_burn < 10)
    throw config_error(config.name +
                       ": too few iterations for diagnostics (need 10 post-burn states)");

  ExperimentResult result;
  switch (config.kind) {
    case ExperimentKind::kScalingSweep:
      result = run_scaling_sweep(config, options);
      break;
    case ExperimentKind::kGaussianComparison:
      result = run_gaussian_comparison(config, options);
      break;
    case ExperimentKind::kBimodal:
      result = run_bimodal(config, options);
      break;
    case ExperimentKind::kGpBenchmark:
      result = run_gp_benchmark(config, options);
      break;
    case ExperimentKind::kExtraDimensional:
      result = run_extra_dimensional(config, options);
      break;
  }
  result.experiment = config.name;
  result.kind = config.kind;
  result.config = config_echo(config);
  return result;
}

}  // namespace simplicial::harness
