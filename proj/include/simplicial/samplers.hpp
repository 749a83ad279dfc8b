#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "simplicial/adaptation.hpp"
#include "simplicial/errors.hpp"
#include "simplicial/geometry.hpp"
#include "simplicial/math.hpp"
#include "simplicial/targets.hpp"
#include "simplicial/trace.hpp"

namespace simplicial {

using RngEngine = std::mt19937_64;

// Probability of each candidate under the density-proportional selection
// rule, max-shifted for stability. -inf entries get probability 0 exactly.
inline Eigen::VectorXd selection_probabilities(
    const Eigen::Ref<const Eigen::VectorXd>& log_densities) {
  const double total = log_sum_exp(log_densities);
  if (!(total > kNegInf))
    throw impossible_state_error("selection_probabilities: all candidates have zero density");
  Eigen::VectorXd probs(log_densities.size());
  for (Index p = 0; p < probs.size(); ++p) probs(p) = std::exp(log_densities(p) - total);
  return probs;
}

// Categorical draw with probability proportional to density. The rounding
// guard at the end can only trigger when the cumulative probabilities sum to
// slightly below 1; it returns the last candidate with nonzero density.
inline Index select_index(const Eigen::Ref<const Eigen::VectorXd>& log_densities,
                          RngEngine& rng) {
  const Eigen::VectorXd probs = selection_probabilities(log_densities);
  std::uniform_real_distribution<double> unif(0, 1);
  const double u = unif(rng);
  double cumulative = 0;
  Index last_live = 0;
  for (Index p = 0; p < probs.size(); ++p) {
    if (probs(p) > 0) last_live = p;
    cumulative += probs(p);
    if (u < cumulative) return p;
  }
  return last_live;
}

struct StepOutcome {
  Index selected = 0;  // chosen candidate; the last index means "stayed" for
                       // simplicial kernels
  bool accepted = false;
};

enum class SimplicialVariant { kVanilla, kGaussianScaled, kExtraDimensional };

struct SimplicialConfig {
  double edge_length = 1.0;
  SimplicialVariant variant = SimplicialVariant::kVanilla;
  const PreconditionRoot<double>* precondition = nullptr;  // non-owning
};

namespace detail {

// Shared selection tail: column m-1 of points is the current state.
inline StepOutcome select_and_move(ChainState& state, const Target& target,
                                   const Eigen::MatrixXd& points, RngEngine& rng) {
  const Index m = points.cols();
  Eigen::VectorXd log_densities(m);
  for (Index p = 0; p + 1 < m; ++p) log_densities(p) = target.log_density(points.col(p));
  log_densities(m - 1) = state.log_density;  // origin vertex, no re-evaluation
  const Index pick = select_index(log_densities, rng);
  StepOutcome outcome{pick, pick != m - 1};
  if (outcome.accepted) {
    state.position = points.col(pick);
    state.log_density = log_densities(pick);
  }
  ++state.iteration;
  return outcome;
}

}  // namespace detail

// One simplicial transition: rotate the base simplex by a Haar draw, scale
// (by a sqrt-chi-square factor for the Gaussian variant), optionally
// precondition, translate to the current position, then select among the
// vertices with probability proportional to target density. The base must
// have unit edge and match the state dimension; pass an embedded simplex for
// fewer proposals than dimensions.
inline StepOutcome simplicial_step(ChainState& state, const Target& target,
                                   const SimplexVertexSet<double>& base,
                                   const SimplicialConfig& cfg, RngEngine& rng) {
  const Index d = state.position.size();
  if (target.dim() != d || base.dim != d)
    throw invalid_argument_error("simplicial_step: dimension mismatch");
  if (cfg.variant == SimplicialVariant::kExtraDimensional)
    throw invalid_argument_error("simplicial_step: use extra_dimensional_step");
  double scale = cfg.edge_length;
  if (cfg.variant == SimplicialVariant::kGaussianScaled)
    scale *= chi_square_edge_scale(d, rng);
  const Eigen::MatrixXd rotation = haar_orthogonal(d, rng);
  const Eigen::MatrixXd points =
      map_simplex(base, rotation, scale, cfg.precondition, state.position);
  return detail::select_and_move(state, target, points, rng);
}

// Extra-dimensional transition: the state is conceptually embedded as
// (theta, 0) in R^P, a P-simplex is rotated by Haar(O_P) around it, and all
// vertices are projected back onto the first D coordinates before selection.
// Only the first D rows of the rotation ever matter, so a Stiefel frame is
// drawn instead of the full P x P matrix. base is the unit-edge P-simplex;
// requires P >= D.
inline StepOutcome extra_dimensional_step(ChainState& state, const Target& target,
                                          const SimplexVertexSet<double>& base,
                                          const SimplicialConfig& cfg, RngEngine& rng) {
  const Index d = state.position.size();
  const Index p_count = base.dim;
  if (target.dim() != d)
    throw invalid_argument_error("extra_dimensional_step: dimension mismatch");
  if (p_count < d)
    throw invalid_argument_error("extra_dimensional_step: need at least dim proposals");
  const Eigen::MatrixXd frame = haar_frame_rows(d, p_count, rng);
  const Eigen::MatrixXd points =
      map_simplex(base, frame, cfg.edge_length, cfg.precondition, state.position);
  return detail::select_and_move(state, target, points, rng);
}

struct RwmConfig {
  double scale = 1.0;
  const PreconditionRoot<double>* precondition = nullptr;
};

// Random-walk Metropolis with a symmetric Gaussian proposal.
inline StepOutcome rwm_step(ChainState& state, const Target& target, const RwmConfig& cfg,
                            RngEngine& rng) {
  if (!(cfg.scale > 0)) throw invalid_argument_error("rwm_step: scale must be positive");
  const Index d = state.position.size();
  if (target.dim() != d) throw invalid_argument_error("rwm_step: dimension mismatch");
  std::normal_distribution<double> gauss(0, 1);
  Eigen::VectorXd z(d);
  for (Index i = 0; i < d; ++i) z(i) = gauss(rng);
  if (cfg.precondition)
    z = cfg.precondition->matrix.triangularView<Eigen::Lower>() * z;
  const Eigen::VectorXd proposal = state.position + cfg.scale * z;
  const double proposal_log_density = target.log_density(proposal);
  bool accepted = false;
  if (proposal_log_density > kNegInf) {
    const double log_ratio = proposal_log_density - state.log_density;
    if (log_ratio >= 0) {
      accepted = true;
    } else {
      std::uniform_real_distribution<double> unif(0, 1);
      accepted = std::log(unif(rng)) < log_ratio;
    }
  }
  if (accepted) {
    state.position = proposal;
    state.log_density = proposal_log_density;
  }
  ++state.iteration;
  return {accepted ? Index(0) : Index(1), accepted};
}

struct MtmConfig {
  Index n_tries = 0;  // 0 means dim + 1, matching the simplicial vertex count
  double scale = 1.0;
  const PreconditionRoot<double>* precondition = nullptr;
};

// Multiple-try Metropolis with weight function w(y|x) = pi(y): select among
// n_tries Gaussian proposals by density, then balance with n_tries - 1 fresh
// reference points centered at the selection plus the current state. With
// n_tries = 1 the acceptance law reduces to plain Metropolis. All proposals
// at zero density count as a rejection.
inline StepOutcome mtm_step(ChainState& state, const Target& target, const MtmConfig& cfg,
                            RngEngine& rng) {
  if (!(cfg.scale > 0)) throw invalid_argument_error("mtm_step: scale must be positive");
  if (cfg.n_tries < 0) throw invalid_argument_error("mtm_step: negative n_tries");
  const Index d = state.position.size();
  if (target.dim() != d) throw invalid_argument_error("mtm_step: dimension mismatch");
  const Index k = cfg.n_tries > 0 ? cfg.n_tries : d + 1;
  std::normal_distribution<double> gauss(0, 1);
  auto perturb = [&](const Eigen::VectorXd& center) {
    Eigen::VectorXd z(d);
    for (Index i = 0; i < d; ++i) z(i) = gauss(rng);
    if (cfg.precondition)
      z = cfg.precondition->matrix.triangularView<Eigen::Lower>() * z;
    return (center + cfg.scale * z).eval();
  };

  Eigen::MatrixXd proposals(d, k);
  Eigen::VectorXd forward(k);
  for (Index j = 0; j < k; ++j) {
    proposals.col(j) = perturb(state.position);
    forward(j) = target.log_density(proposals.col(j));
  }
  const double forward_total = log_sum_exp(forward);
  ++state.iteration;
  if (!(forward_total > kNegInf)) return {k, false};
  const Index pick = select_index(forward, rng);

  Eigen::VectorXd reverse(k);
  for (Index j = 0; j + 1 < k; ++j)
    reverse(j) = target.log_density(perturb(proposals.col(pick)));
  reverse(k - 1) = state.log_density;  // current state is the k-th reference
  const double log_ratio = forward_total - log_sum_exp(reverse);
  bool accepted = false;
  if (log_ratio >= 0) {
    accepted = true;
  } else {
    std::uniform_real_distribution<double> unif(0, 1);
    accepted = std::log(unif(rng)) < log_ratio;
  }
  if (accepted) {
    state.position = proposals.col(pick);
    state.log_density = forward(pick);
  }
  return {accepted ? pick : k, accepted};
}

// Transition kernel bound to a target, owning whatever per-chain adaptation
// state it needs. One instance drives exactly one chain.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual Index dim() const = 0;
  virtual const Target& target() const = 0;
  virtual StepOutcome advance(ChainState& state, RngEngine& rng) = 0;
  // Per-state bookkeeping recorded into the trace alongside each column.
  virtual std::vector<std::string> extra_names() const { return {}; }
  virtual void append_extras(const ChainState&, double*) const {}
};

class SimplicialKernel : public Kernel {
 public:
  struct Options {
    double edge_length = 1.0;
    SimplicialVariant variant = SimplicialVariant::kVanilla;
    Index proposal_count = 0;  // 0: dim proposals; < dim embeds a sub-simplex;
                               // extra-dimensional requires >= dim
    std::optional<double> target_acceptance;  // enables edge-length adaptation
    double adapt_decay = 0.6;
    bool adapt_covariance = false;
    double covariance_epsilon = 1e-6;
    long covariance_refresh = 100;
    long covariance_freeze_after = std::numeric_limits<long>::max();
    std::optional<Eigen::MatrixXd> fixed_precondition;  // covariance, not root
  };

  SimplicialKernel(const Target& target, Options opts)
      : target_(target), opts_(opts) {
    const Index d = target.dim();
    Index p = opts.proposal_count > 0 ? opts.proposal_count : d;
    if (opts.variant == SimplicialVariant::kExtraDimensional) {
      if (p < d)
        throw invalid_argument_error("SimplicialKernel: extra-dimensional needs proposal_count >= dim");
      base_ = regular_simplex(p, 1.0);
    } else {
      if (p > d)
        throw invalid_argument_error("SimplicialKernel: more proposals than dimensions needs the extra-dimensional variant");
      base_ = p == d ? regular_simplex(d, 1.0) : embed_simplex(regular_simplex(p, 1.0), d);
    }
    if (opts.fixed_precondition) fixed_root_ = spd_root(*opts.fixed_precondition);
    adapt_.log_edge_length = std::log(opts.edge_length);
    adapt_.decay_exponent = opts.adapt_decay;
    if (opts.target_acceptance) adapt_.target_acceptance = *opts.target_acceptance;
    adapt_.covariance_enabled = opts.adapt_covariance;
    adapt_.covariance_epsilon = opts.covariance_epsilon;
    adapt_.refresh_interval = opts.covariance_refresh;
    adapt_.freeze_after = opts.covariance_freeze_after;
  }

  Index dim() const override { return target_.dim(); }
  const Target& target() const override { return target_; }

  StepOutcome advance(ChainState& state, RngEngine& rng) override {
    SimplicialConfig cfg;
    cfg.edge_length = opts_.target_acceptance ? adapt_.edge_length() : opts_.edge_length;
    cfg.variant = opts_.variant;
    cfg.precondition = fixed_root_ ? &*fixed_root_
                                   : (adapt_.root ? &*adapt_.root : nullptr);
    const StepOutcome outcome =
        opts_.variant == SimplicialVariant::kExtraDimensional
            ? extra_dimensional_step(state, target_, base_, cfg, rng)
            : simplicial_step(state, target_, base_, cfg, rng);
    if (opts_.target_acceptance) adapt_edge_length(adapt_, outcome.accepted);
    adapt_covariance(adapt_, state.position);
    return outcome;
  }

  std::vector<std::string> extra_names() const override { return {"edge_length"}; }
  void append_extras(const ChainState&, double* out) const override {
    out[0] = opts_.target_acceptance ? adapt_.edge_length() : opts_.edge_length;
  }

  double edge_length() const {
    return opts_.target_acceptance ? adapt_.edge_length() : opts_.edge_length;
  }
  const AdaptationState& adaptation() const { return adapt_; }

 private:
  const Target& target_;
  Options opts_;
  SimplexVertexSet<double> base_;
  AdaptationState adapt_;
  std::optional<PreconditionRoot<double>> fixed_root_;
};

class RwmKernel : public Kernel {
 public:
  struct Options {
    double scale = 1.0;
    std::optional<double> target_acceptance;  // enables scale adaptation
    double adapt_decay = 0.6;
    bool adapt_covariance = false;
    double covariance_epsilon = 1e-6;
    long covariance_refresh = 100;
    long covariance_freeze_after = std::numeric_limits<long>::max();
    std::optional<Eigen::MatrixXd> fixed_precondition;
  };

  RwmKernel(const Target& target, Options opts) : target_(target), opts_(opts) {
    if (opts.fixed_precondition) fixed_root_ = spd_root(*opts.fixed_precondition);
    adapt_.log_edge_length = std::log(opts.scale);
    adapt_.decay_exponent = opts.adapt_decay;
    if (opts.target_acceptance) adapt_.target_acceptance = *opts.target_acceptance;
    adapt_.covariance_enabled = opts.adapt_covariance;
    adapt_.covariance_epsilon = opts.covariance_epsilon;
    adapt_.refresh_interval = opts.covariance_refresh;
    adapt_.freeze_after = opts.covariance_freeze_after;
  }

  Index dim() const override { return target_.dim(); }
  const Target& target() const override { return target_; }

  StepOutcome advance(ChainState& state, RngEngine& rng) override {
    RwmConfig cfg;
    cfg.scale = opts_.target_acceptance ? adapt_.edge_length() : opts_.scale;
    cfg.precondition = fixed_root_ ? &*fixed_root_
                                   : (adapt_.root ? &*adapt_.root : nullptr);
    const StepOutcome outcome = rwm_step(state, target_, cfg, rng);
    if (opts_.target_acceptance) adapt_edge_length(adapt_, outcome.accepted);
    adapt_covariance(adapt_, state.position);
    return outcome;
  }

  std::vector<std::string> extra_names() const override { return {"scale"}; }
  void append_extras(const ChainState&, double* out) const override {
    out[0] = opts_.target_acceptance ? adapt_.edge_length() : opts_.scale;
  }

  const AdaptationState& adaptation() const { return adapt_; }

 private:
  const Target& target_;
  Options opts_;
  AdaptationState adapt_;
  std::optional<PreconditionRoot<double>> fixed_root_;
};

class MtmKernel : public Kernel {
 public:
  struct Options {
    Index n_tries = 0;  // 0 means dim + 1
    double scale = 1.0;
    std::optional<double> target_acceptance;
    double adapt_decay = 0.6;
    bool adapt_covariance = false;
    double covariance_epsilon = 1e-6;
    long covariance_refresh = 100;
    long covariance_freeze_after = std::numeric_limits<long>::max();
    std::optional<Eigen::MatrixXd> fixed_precondition;
  };

  MtmKernel(const Target& target, Options opts) : target_(target), opts_(opts) {
    if (opts.fixed_precondition) fixed_root_ = spd_root(*opts.fixed_precondition);
    adapt_.log_edge_length = std::log(opts.scale);
    adapt_.decay_exponent = opts.adapt_decay;
    if (opts.target_acceptance) adapt_.target_acceptance = *opts.target_acceptance;
    adapt_.covariance_enabled = opts.adapt_covariance;
    adapt_.covariance_epsilon = opts.covariance_epsilon;
    adapt_.refresh_interval = opts.covariance_refresh;
    adapt_.freeze_after = opts.covariance_freeze_after;
  }

  Index dim() const override { return target_.dim(); }
  const Target& target() const override { return target_; }

  StepOutcome advance(ChainState& state, RngEngine& rng) override {
    MtmConfig cfg;
    cfg.n_tries = opts_.n_tries;
    cfg.scale = opts_.target_acceptance ? adapt_.edge_length() : opts_.scale;
    cfg.precondition = fixed_root_ ? &*fixed_root_
                                   : (adapt_.root ? &*adapt_.root : nullptr);
    const StepOutcome outcome = mtm_step(state, target_, cfg, rng);
    if (opts_.target_acceptance) adapt_edge_length(adapt_, outcome.accepted);
    adapt_covariance(adapt_, state.position);
    return outcome;
  }

  std::vector<std::string> extra_names() const override { return {"scale"}; }
  void append_extras(const ChainState&, double* out) const override {
    out[0] = opts_.target_acceptance ? adapt_.edge_length() : opts_.scale;
  }

 private:
  const Target& target_;
  Options opts_;
  AdaptationState adapt_;
  std::optional<PreconditionRoot<double>> fixed_root_;
};

// Drive one chain for n_iterations transitions from a point of finite
// density. Fully deterministic given the seed, except for the measured wall
// time, which covers the iteration loop only.
inline ChainTrace run_chain(Kernel& kernel, const Target& target, long n_iterations,
                            const Eigen::Ref<const Eigen::VectorXd>& initial,
                            std::uint64_t seed) {
  if (n_iterations < 0)
    throw invalid_argument_error("run_chain: negative iteration count");
  if (initial.size() != kernel.dim() || target.dim() != kernel.dim())
    throw invalid_argument_error("run_chain: dimension mismatch");
  ChainState state{initial, target.log_density(initial), 0};
  if (!(state.log_density > kNegInf))
    throw invalid_start_error("run_chain: initial point has zero target density");

  RngEngine rng(seed);
  ChainTrace trace;
  trace.seed = seed;
  trace.extra_names = kernel.extra_names();
  const Index n_extras = static_cast<Index>(trace.extra_names.size());
  trace.states.resize(initial.size(), n_iterations + 1);
  trace.extras.resize(n_extras, n_iterations + 1);
  trace.selected_index.reserve(static_cast<std::size_t>(n_iterations));
  trace.accepted.reserve(static_cast<std::size_t>(n_iterations));
  trace.states.col(0) = state.position;
  if (n_extras > 0) kernel.append_extras(state, trace.extras.col(0).data());

  const auto start = std::chrono::steady_clock::now();
  for (long t = 1; t <= n_iterations; ++t) {
    const StepOutcome outcome = kernel.advance(state, rng);
    trace.states.col(t) = state.position;
    trace.selected_index.push_back(static_cast<int>(outcome.selected));
    trace.accepted.push_back(outcome.accepted ? 1 : 0);
    if (n_extras > 0) kernel.append_extras(state, trace.extras.col(t).data());
  }
  const auto stop = std::chrono::steady_clock::now();
  trace.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return trace;
}

}  // namespace simplicial
