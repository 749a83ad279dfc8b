#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "simplicial/diagnostics.hpp"
#include "simplicial/errors.hpp"
#include "simplicial/samplers.hpp"
#include "simplicial/slice.hpp"
#include "simplicial/targets.hpp"
#include "support/stats.hpp"

using namespace simplicial;

namespace {

Eigen::MatrixXd post_burn(const ChainTrace& trace, double burn_fraction = 0.2) {
  const Eigen::Index total = trace.states.cols();
  const Eigen::Index burn = static_cast<Eigen::Index>(burn_fraction * static_cast<double>(total));
  return trace.states.rightCols(total - burn);
}

double coordinate_mean(const Eigen::MatrixXd& block, Eigen::Index row) {
  return block.row(row).mean();
}

double coordinate_variance(const Eigen::MatrixXd& block, Eigen::Index row) {
  const double mean = coordinate_mean(block, row);
  return (block.row(row).array() - mean).square().sum() /
         static_cast<double>(block.cols() - 1);
}

}  // namespace

TEST_CASE("selection probabilities are density proportional") {
  Eigen::VectorXd logs(2);
  logs << std::log(3.0), std::log(1.0);
  const Eigen::VectorXd probs = selection_probabilities(logs);
  CHECK(std::abs(probs(0) - 0.75) < 1e-15);
  CHECK(std::abs(probs(1) - 0.25) < 1e-15);

  Eigen::VectorXd with_dead(2);
  with_dead << 0.0, kNegInf;
  const Eigen::VectorXd degenerate = selection_probabilities(with_dead);
  CHECK(degenerate(0) == 1.0);
  CHECK(degenerate(1) == 0.0);

  Eigen::VectorXd all_dead = Eigen::VectorXd::Constant(3, kNegInf);
  CHECK_THROWS_AS(selection_probabilities(all_dead), impossible_state_error);
}

TEST_CASE("selection probabilities permute with their inputs") {
  Eigen::VectorXd logs(4);
  logs << -1.0, 0.5, kNegInf, 2.0;
  Eigen::VectorXd permuted(4);
  permuted << 2.0, kNegInf, -1.0, 0.5;
  const Eigen::VectorXd p = selection_probabilities(logs);
  const Eigen::VectorXd q = selection_probabilities(permuted);
  CHECK(p(0) == q(2));
  CHECK(p(1) == q(3));
  CHECK(p(2) == q(1));
  CHECK(p(3) == q(0));
}

TEST_CASE("select index draws candidates at their selection frequencies") {
  RngEngine rng(211);
  Eigen::VectorXd logs = Eigen::VectorXd::Zero(4);
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_index(logs, rng))];
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(n) - 0.25) < 0.01);

  Eigen::VectorXd two(2);
  two << std::log(3.0), std::log(1.0);
  int first = 0;
  for (int i = 0; i < n; ++i)
    if (select_index(two, rng) == 0) ++first;
  CHECK(std::abs(first / static_cast<double>(n) - 0.75) < 0.01);

  Eigen::VectorXd with_dead(2);
  with_dead << 0.0, kNegInf;
  for (int i = 0; i < 1000; ++i) CHECK(select_index(with_dead, rng) == 0);
}

TEST_CASE("simplicial step on a flat target accepts at dim over dim plus one") {
  const BoxUniformTarget target(3, 1e6);
  SimplicialKernel kernel(target, {.edge_length = 1.0});
  const ChainTrace trace =
      run_chain(kernel, target, 20000, Eigen::VectorXd::Zero(3), 223);
  CHECK(std::abs(acceptance_rate(trace) - 0.75) < 0.01);
  for (int s : trace.selected_index) {
    CHECK(s >= 0);
    CHECK(s <= 3);
  }
}

TEST_CASE("vanishing edge length makes acceptance approach p over p plus one") {
  const GaussianTarget target(GaussianSpec::spherical(3));
  SimplicialKernel full(target, {.edge_length = 1e-8});
  const ChainTrace dense =
      run_chain(full, target, 20000, Eigen::VectorXd::Zero(3), 227);
  CHECK(std::abs(acceptance_rate(dense) - 0.75) < 0.01);

  // Two proposals embedded in three dimensions: 2/3 in the same limit.
  SimplicialKernel embedded(target, {.edge_length = 1e-8, .proposal_count = 2});
  const ChainTrace sparse =
      run_chain(embedded, target, 20000, Eigen::VectorXd::Zero(3), 229);
  CHECK(std::abs(acceptance_rate(sparse) - 2.0 / 3.0) < 0.01);
  for (int s : sparse.selected_index) CHECK(s <= 2);
}

TEST_CASE("simplicial step keeps the density cache coherent and stays put on rejection") {
  const GaussianTarget target(GaussianSpec::spherical(3));
  const SimplexVertexSet<double> base = regular_simplex<double>(3, 1.0);
  const SimplicialConfig cfg{2.0, SimplicialVariant::kVanilla, nullptr};
  RngEngine rng(233);
  ChainState state{Eigen::VectorXd::Zero(3), target.log_density(Eigen::VectorXd::Zero(3)), 0};
  bool saw_stay = false;
  bool saw_move = false;
  for (int t = 0; t < 300; ++t) {
    const Eigen::VectorXd before = state.position;
    const StepOutcome outcome = simplicial_step(state, target, base, cfg, rng);
    CHECK(state.log_density == target.log_density(state.position));
    if (outcome.accepted) {
      CHECK(outcome.selected < 3);
      saw_move = true;
    } else {
      CHECK(outcome.selected == 3);
      CHECK(state.position == before);
      saw_stay = true;
    }
  }
  CHECK(saw_stay);
  CHECK(saw_move);
  CHECK(state.iteration == 300);
}

TEST_CASE("vanilla simplicial chain reproduces gaussian moments") {
  const GaussianTarget target(GaussianSpec::spherical(2));
  // Acceptance can never exceed 2/3 with two proposals, so the adaptation
  // target must sit below that or the edge collapses.
  SimplicialKernel kernel(target, {.edge_length = 1.0, .target_acceptance = 0.5});
  const ChainTrace trace =
      run_chain(kernel, target, 200000, Eigen::VectorXd::Constant(2, 3.0), 239);
  const Eigen::MatrixXd kept = post_burn(trace);
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(std::abs(coordinate_mean(kept, i)) < 0.05);
    CHECK(std::abs(coordinate_variance(kept, i) - 1.0) < 0.07);
  }
  // Thinned draws against the exact marginal law.
  std::vector<double> thinned;
  for (Eigen::Index t = 0; t < kept.cols(); t += 50) thinned.push_back(kept(0, t));
  const double ks = test_support::ks_statistic(thinned, [](double x) { return normal_cdf(x); });
  CHECK(ks < test_support::ks_critical(0.01, thinned.size()));
}

TEST_CASE("gaussian scaled variant leaves the target invariant too") {
  const GaussianTarget target(GaussianSpec::spherical(2));
  SimplicialKernel kernel(
      target, {.edge_length = 1.5, .variant = SimplicialVariant::kGaussianScaled});
  const ChainTrace trace =
      run_chain(kernel, target, 200000, Eigen::VectorXd::Zero(2), 241);
  const Eigen::MatrixXd kept = post_burn(trace);
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(std::abs(coordinate_mean(kept, i)) < 0.05);
    CHECK(std::abs(coordinate_variance(kept, i) - 1.0) < 0.07);
  }
}

TEST_CASE("preconditioned simplicial equalizes stretched coordinates") {
  Eigen::VectorXd variances = Eigen::VectorXd::LinSpaced(16, 1.0, 16.0);
  const GaussianTarget target(GaussianSpec::diagonal(variances));
  SimplicialKernel kernel(target,
                          {.edge_length = 1.0,
                           .target_acceptance = 0.675,
                           .fixed_precondition = variances.asDiagonal().toDenseMatrix()});
  const ChainTrace trace =
      run_chain(kernel, target, 40000, Eigen::VectorXd::Zero(16), 251);
  const Eigen::MatrixXd kept = post_burn(trace);
  const EssReport report = ess_report(kept, 1.0);
  CHECK(report.per_coordinate.maxCoeff() / report.per_coordinate.minCoeff() < 2.0);
  for (Eigen::Index i = 0; i < 16; ++i) {
    const double rel = coordinate_variance(kept, i) / variances(i);
    CHECK(std::abs(rel - 1.0) < 0.25);
  }
}

TEST_CASE("rwm accepts every flat-target proposal and recovers moments") {
  const BoxUniformTarget flat(2, 1e6);
  RwmKernel flat_kernel(flat, {.scale = 1.0});
  const ChainTrace flat_trace =
      run_chain(flat_kernel, flat, 2000, Eigen::VectorXd::Zero(2), 257);
  CHECK(acceptance_rate(flat_trace) == 1.0);

  const GaussianTarget target(GaussianSpec::spherical(1, 4.0));
  RwmKernel kernel(target, {.scale = 2.38});
  const ChainTrace trace =
      run_chain(kernel, target, 200000, Eigen::VectorXd::Zero(1), 263);
  const Eigen::MatrixXd kept = post_burn(trace);
  CHECK(std::abs(coordinate_mean(kept, 0)) < 0.05);
  CHECK(std::abs(coordinate_variance(kept, 0) - 4.0) < 0.12);
}

TEST_CASE("rwm at the classic optimal scale lands near the asymptotic acceptance") {
  // scale = 2.38/sqrt(D) on a standard normal gives acceptance -> 0.234 as D
  // grows; at D = 64 the finite-dimensional value sits within a few points.
  const Eigen::Index d = 64;
  const GaussianTarget target(GaussianSpec::spherical(d));
  RwmKernel kernel(target, {.scale = 2.38 / std::sqrt(static_cast<double>(d))});
  const ChainTrace trace =
      run_chain(kernel, target, 100000, Eigen::VectorXd::Zero(d), 269);
  CHECK(std::abs(acceptance_rate(trace) - 0.234) < 0.04);
}

TEST_CASE("mtm with one try matches the metropolis acceptance law pointwise") {
  const GaussianTarget target(GaussianSpec::spherical(2));
  Eigen::VectorXd x0(2);
  x0 << 2.0, 0.0;
  const double l0 = target.log_density(x0);
  const MtmConfig mtm_cfg{1, 1.0, nullptr};
  const RwmConfig rwm_cfg{1.0, nullptr};
  RngEngine rng_a(271), rng_b(277);
  const int n = 60000;
  int acc_mtm = 0, acc_rwm = 0;
  for (int i = 0; i < n; ++i) {
    ChainState sa{x0, l0, 0};
    if (mtm_step(sa, target, mtm_cfg, rng_a).accepted) ++acc_mtm;
    ChainState sb{x0, l0, 0};
    if (rwm_step(sb, target, rwm_cfg, rng_b).accepted) ++acc_rwm;
  }
  const double z = test_support::proportion_z_statistic(acc_mtm, n, acc_rwm, n);
  CHECK(std::abs(z) < 2.576);  // alpha = 0.01
}

TEST_CASE("mtm accepts flat-target proposals and recovers gaussian moments") {
  const BoxUniformTarget flat(2, 1e6);
  MtmKernel flat_kernel(flat, {.n_tries = 3, .scale = 1.0});
  const ChainTrace flat_trace =
      run_chain(flat_kernel, flat, 2000, Eigen::VectorXd::Zero(2), 281);
  CHECK(acceptance_rate(flat_trace) == 1.0);

  const GaussianTarget target(GaussianSpec::spherical(2));
  MtmKernel kernel(target, {.n_tries = 3, .scale = 1.5});
  const ChainTrace trace =
      run_chain(kernel, target, 200000, Eigen::VectorXd::Constant(2, -2.0), 283);
  const Eigen::MatrixXd kept = post_burn(trace);
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(std::abs(coordinate_mean(kept, i)) < 0.05);
    CHECK(std::abs(coordinate_variance(kept, i) - 1.0) < 0.07);
  }
}

TEST_CASE("mtm rejects when every proposal has zero density") {
  const BoxUniformTarget target(2, 1.0);
  const MtmConfig cfg{4, 1e9, nullptr};
  RngEngine rng(293);
  ChainState state{Eigen::VectorXd::Zero(2), 0.0, 0};
  for (int t = 0; t < 100; ++t) {
    const StepOutcome outcome = mtm_step(state, target, cfg, rng);
    CHECK(!outcome.accepted);
    CHECK(outcome.selected == 4);
    CHECK(state.position == Eigen::VectorXd::Zero(2));
  }
  CHECK(state.iteration == 100);
}

TEST_CASE("extra dimensional step with matching counts behaves like vanilla") {
  const GaussianTarget target(GaussianSpec::spherical(2));
  SimplicialKernel kernel(target,
                          {.edge_length = 1.2,
                           .variant = SimplicialVariant::kExtraDimensional,
                           .proposal_count = 2});
  const ChainTrace trace =
      run_chain(kernel, target, 150000, Eigen::VectorXd::Zero(2), 307);
  const Eigen::MatrixXd kept = post_burn(trace);
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(std::abs(coordinate_mean(kept, i)) < 0.05);
    CHECK(std::abs(coordinate_variance(kept, i) - 1.0) < 0.07);
  }
}

TEST_CASE("extra dimensional step accepts at p over p plus one for tiny edges") {
  const GaussianTarget target(GaussianSpec::spherical(2));
  SimplicialKernel kernel(target,
                          {.edge_length = 1e-8,
                           .variant = SimplicialVariant::kExtraDimensional,
                           .proposal_count = 5});
  const ChainTrace trace =
      run_chain(kernel, target, 20000, Eigen::VectorXd::Zero(2), 311);
  CHECK(std::abs(acceptance_rate(trace) - 5.0 / 6.0) < 0.01);
  for (int s : trace.selected_index) CHECK(s <= 5);
}

TEST_CASE("extra dimensional sampling leaves a stretched gaussian invariant") {
  Eigen::VectorXd variances(2);
  variances << 1.0, 9.0;
  const GaussianTarget target(GaussianSpec::diagonal(variances));
  SimplicialKernel kernel(target,
                          {.edge_length = 2.0,
                           .variant = SimplicialVariant::kExtraDimensional,
                           .proposal_count = 6});
  const ChainTrace trace =
      run_chain(kernel, target, 200000, Eigen::VectorXd::Zero(2), 313);
  const Eigen::MatrixXd kept = post_burn(trace);
  CHECK(std::abs(coordinate_variance(kept, 0) - 1.0) < 0.08);
  CHECK(std::abs(coordinate_variance(kept, 1) - 9.0) < 0.7);
}

TEST_CASE("kernel option validation") {
  const GaussianTarget target(GaussianSpec::spherical(3));
  CHECK_THROWS_AS(SimplicialKernel(target, {.proposal_count = 5}), invalid_argument_error);
  CHECK_THROWS_AS((SimplicialKernel(target,
                                    {.variant = SimplicialVariant::kExtraDimensional,
                                     .proposal_count = 2})),
                  invalid_argument_error);
  const SimplexVertexSet<double> base = regular_simplex<double>(3, 1.0);
  RngEngine rng(317);
  ChainState state{Eigen::VectorXd::Zero(3), target.log_density(Eigen::VectorXd::Zero(3)), 0};
  SimplicialConfig extra_cfg{1.0, SimplicialVariant::kExtraDimensional, nullptr};
  CHECK_THROWS_AS(simplicial_step(state, target, base, extra_cfg, rng),
                  invalid_argument_error);
  RwmConfig bad_scale{0.0, nullptr};
  CHECK_THROWS_AS(rwm_step(state, target, bad_scale, rng), invalid_argument_error);
}

TEST_CASE("edge length adaptation follows the diminishing robbins-monro rule") {
  AdaptationState a;
  a.target_acceptance = 0.675;
  a.log_edge_length = 0.0;
  adapt_edge_length(a, true);
  CHECK(a.log_edge_length == 1.0 - 0.675);  // gain 1 at step 1
  adapt_edge_length(a, false);
  const double gain2 = std::pow(2.0, -0.6);
  CHECK(std::abs(a.log_edge_length - (0.325 - gain2 * 0.675)) < 1e-15);
  CHECK(a.step_count == 2);
}

TEST_CASE("adaptive edge drives acceptance toward its target") {
  const GaussianTarget target(GaussianSpec::spherical(4));
  SimplicialKernel kernel(target, {.edge_length = 20.0, .target_acceptance = 0.675});
  const ChainTrace trace =
      run_chain(kernel, target, 60000, Eigen::VectorXd::Zero(4), 331);
  // Acceptance over the settled tail.
  long moved = 0;
  const std::size_t half = trace.accepted.size() / 2;
  for (std::size_t t = half; t < trace.accepted.size(); ++t) moved += trace.accepted[t];
  const double tail_rate = static_cast<double>(moved) / static_cast<double>(half);
  CHECK(std::abs(tail_rate - 0.675) < 0.05);
  // The adapted edge is recorded alongside each state.
  REQUIRE(trace.extra_names == std::vector<std::string>{"edge_length"});
  CHECK(std::abs(trace.extras(0, 0) - 20.0) < 1e-10);  // exp(log(20)) round trip
  CHECK(trace.extras(0, trace.extras.cols() - 1) < 20.0);
}

TEST_CASE("running covariance converges to the sample-generating covariance") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.6, 0.6, 1.0;
  const Eigen::MatrixXd root = spd_root(sigma).matrix;
  AdaptationState a;
  a.covariance_enabled = true;
  RngEngine rng(337);
  std::normal_distribution<double> gauss;
  for (int n = 0; n < 5000; ++n) {
    Eigen::Vector2d z(gauss(rng), gauss(rng));
    adapt_covariance(a, root.triangularView<Eigen::Lower>() * z);
  }
  const Eigen::MatrixXd estimate = running_covariance(a);
  Eigen::MatrixXd ridge = sigma;
  ridge.diagonal().array() += a.covariance_epsilon;
  CHECK((estimate - ridge).norm() / ridge.norm() < 0.05);
  // 5000 is a refresh multiple, so the root matches the estimate exactly.
  REQUIRE(a.root.has_value());
  const Eigen::MatrixXd rebuilt =
      a.root->matrix * a.root->matrix.transpose();
  CHECK((rebuilt - estimate).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("running covariance of a constant stream is the ridge alone") {
  AdaptationState a;
  a.covariance_enabled = true;
  const Eigen::VectorXd point = Eigen::VectorXd::Constant(3, 7.0);
  for (int n = 0; n < 200; ++n) adapt_covariance(a, point);
  const Eigen::MatrixXd estimate = running_covariance(a);
  CHECK(estimate == Eigen::MatrixXd(1e-6 * Eigen::MatrixXd::Identity(3, 3)));
  REQUIRE(a.root.has_value());
  CHECK(std::abs(a.root->matrix(0, 0) - 1e-3) < 1e-12);
}

TEST_CASE("covariance adaptation freezes after its cutoff") {
  AdaptationState a;
  a.covariance_enabled = true;
  a.freeze_after = 50;
  RngEngine rng(347);
  std::normal_distribution<double> gauss;
  for (int n = 0; n < 200; ++n)
    adapt_covariance(a, Eigen::VectorXd::Constant(1, gauss(rng)));
  CHECK(a.sample_count == 50);
}

TEST_CASE("slice sampling a standard normal recovers its moments") {
  RngEngine rng(349);
  const SliceOptions opts;
  auto logf = [](double x) { return -0.5 * x * x; };
  double x = 0;
  const int n = 100000;
  std::vector<double> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const SliceResult result = slice_step_univariate(x, logf, opts, rng);
    CHECK(!result.expansion_capped);
    x = result.value;
    samples.push_back(x);
  }
  CHECK(std::abs(test_support::mean_of(samples)) < 0.02);
  CHECK(std::abs(test_support::variance_of(samples) - 1.0) < 0.03);
}

TEST_CASE("slice level exactly at the current density stays inside the level set") {
  RngEngine rng(353);
  auto logf = [](double x) { return -0.5 * x * x; };
  const double start = 1.5;
  for (int i = 0; i < 200; ++i) {
    const SliceResult result = slice_step_at_level(start, logf, logf(start), SliceOptions{}, rng);
    CHECK(!result.expansion_capped);
    CHECK(std::abs(result.value) <= start + 1e-12);
  }
}

TEST_CASE("slice shrinkage collapses onto an isolated spike") {
  RngEngine rng(359);
  const double spike = 2.0;
  auto logf = [&](double x) { return x == spike ? 0.0 : -1e10; };
  const SliceResult result = slice_step_univariate(spike, logf, SliceOptions{}, rng);
  CHECK(result.value == spike);
  CHECK(!result.expansion_capped);
}

TEST_CASE("slice expansion cap flags an endless plateau") {
  RngEngine rng(367);
  auto flat = [](double) { return 0.0; };
  SliceOptions opts;
  opts.max_step_out = 20;
  const SliceResult result = slice_step_univariate(0.5, flat, opts, rng);
  CHECK(result.expansion_capped);
  CHECK(result.value == 0.5);

  auto neg_inf = [](double) { return kNegInf; };
  CHECK_THROWS_AS(slice_step_univariate(0.0, neg_inf, SliceOptions{}, rng),
                  invalid_argument_error);
  SliceOptions bad;
  bad.width = 0.0;
  CHECK_THROWS_AS(slice_step_univariate(0.0, flat, bad, rng), invalid_argument_error);
}

TEST_CASE("run chain handles the trivial and invalid cases") {
  const GaussianTarget target(GaussianSpec::spherical(2));
  SimplicialKernel kernel(target, {.edge_length = 1.0});
  const ChainTrace empty = run_chain(kernel, target, 0, Eigen::VectorXd::Zero(2), 373);
  CHECK(empty.states.cols() == 1);
  CHECK(empty.accepted.empty());
  CHECK(empty.states.col(0) == Eigen::VectorXd::Zero(2));

  CHECK_THROWS_AS(run_chain(kernel, target, -1, Eigen::VectorXd::Zero(2), 373),
                  invalid_argument_error);
  CHECK_THROWS_AS(run_chain(kernel, target, 10, Eigen::VectorXd::Zero(3), 373),
                  invalid_argument_error);

  const BoxUniformTarget box(2, 1.0);
  SimplicialKernel box_kernel(box, {.edge_length = 1.0});
  CHECK_THROWS_AS(
      run_chain(box_kernel, box, 10, Eigen::VectorXd::Constant(2, 5.0), 373),
      invalid_start_error);
}

TEST_CASE("run chain is deterministic in everything but the clock") {
  const GaussianTarget target(GaussianSpec::spherical(3));
  auto make_trace = [&](std::uint64_t seed) {
    SimplicialKernel kernel(target, {.edge_length = 1.0, .target_acceptance = 0.675});
    return run_chain(kernel, target, 5000, Eigen::VectorXd::Zero(3), seed);
  };
  const ChainTrace a = make_trace(379);
  const ChainTrace b = make_trace(379);
  CHECK(a.states == b.states);
  CHECK(a.extras == b.extras);
  CHECK(a.accepted == b.accepted);
  CHECK(a.selected_index == b.selected_index);
  CHECK(a.seed == 379);

  const ChainTrace c = make_trace(383);
  CHECK(a.states != c.states);
}
