#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "simplicial/diagnostics.hpp"
#include "simplicial/errors.hpp"
#include "support/stats.hpp"

using namespace simplicial;

namespace {

// Stationary AR(1) with unit marginal variance.
Eigen::VectorXd ar1_series(Eigen::Index n, double phi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(n);
  x(0) = normal(rng);
  const double innovation_sd = std::sqrt(1.0 - phi * phi);
  for (Eigen::Index t = 1; t < n; ++t) x(t) = phi * x(t - 1) + innovation_sd * normal(rng);
  return x;
}

// Each source value repeated `times` in a row.
Eigen::VectorXd repeated_series(Eigen::Index blocks, int times, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(blocks * times);
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const double v = normal(rng);
    for (int r = 0; r < times; ++r) x(b * times + r) = v;
  }
  return x;
}

ChainTrace trace_from_positions(const std::vector<double>& positions) {
  ChainTrace trace;
  trace.states.resize(1, static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i)
    trace.states(0, static_cast<Eigen::Index>(i)) = positions[i];
  trace.accepted.assign(positions.size() - 1, 1);
  trace.selected_index.assign(positions.size() - 1, 0);
  return trace;
}

}  // namespace

TEST_CASE("fft autocovariance matches the direct sum") {
  const Eigen::VectorXd x = ar1_series(2000, 0.7, 31);
  const Eigen::VectorXd via_fft = autocovariance(x);
  const Eigen::VectorXd direct = test_support::brute_autocovariance(x, 50);
  for (Eigen::Index k = 0; k <= 50; ++k) CHECK(std::abs(via_fft(k) - direct(k)) < 1e-10);
}

TEST_CASE("iid series keeps nearly its full sample size") {
  const Eigen::VectorXd x = ar1_series(100000, 0.0, 37);
  const double ess = effective_sample_size(x);
  CHECK(ess > 0.95 * 100000);
  CHECK(ess <= 100000.0);
}

TEST_CASE("ar1 ess matches the analytic efficiency") {
  // Efficiency (1-phi)/(1+phi) = 1/19 at phi = 0.9.
  const Eigen::Index n = 100000;
  const Eigen::VectorXd x = ar1_series(n, 0.9, 41);
  const double ess = effective_sample_size(x);
  const double expected = static_cast<double>(n) / 19.0;
  CHECK(std::abs(ess - expected) < 0.10 * expected);
}

TEST_CASE("value repetition divides ess by the repeat count") {
  // Repeating each draw r times gives autocorrelations (r-k)/r at lag k < r,
  // so 1 + 2*sum = r and ESS = N/r. Checked for r = 3 against both the
  // closed form and a direct autocovariance evaluation of the same rule.
  const Eigen::Index blocks = 33334;
  const Eigen::VectorXd x3 = repeated_series(blocks, 3, 43);
  const double n3 = static_cast<double>(x3.size());
  const double ess3 = effective_sample_size(x3);
  CHECK(std::abs(ess3 - n3 / 3.0) < 0.10 * (n3 / 3.0));

  // Direct-sum replay of the pair/truncate/clamp rule. 41 lags is far past
  // where a noise pair goes non-positive, so both paths truncate together.
  const Eigen::VectorXd gamma = test_support::brute_autocovariance(x3, 41);
  double paired = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 <= 41; k += 2) {
    double pair = gamma(k) + gamma(k + 1);
    if (!(pair > 0)) break;
    pair = std::min(pair, prev);
    paired += pair;
    prev = pair;
  }
  const double oracle = n3 * gamma(0) / (2 * paired - gamma(0));
  CHECK(std::abs(ess3 - oracle) < 1e-9 * oracle);

  const Eigen::VectorXd x2 = repeated_series(50000, 2, 47);
  const double n2 = static_cast<double>(x2.size());
  const double ess2 = effective_sample_size(x2);
  CHECK(std::abs(ess2 - n2 / 2.0) < 0.10 * (n2 / 2.0));
}

TEST_CASE("degenerate ess inputs are rejected") {
  CHECK_THROWS_AS(effective_sample_size(Eigen::VectorXd::Zero(9)), invalid_argument_error);
  CHECK_THROWS_AS(effective_sample_size(Eigen::VectorXd::Constant(100, 4.2)),
                  undefined_ess_error);
}

TEST_CASE("ess is invariant under shift and scale") {
  const Eigen::VectorXd x = ar1_series(4096, 0.6, 53);
  const double base = effective_sample_size(x);
  // Power-of-two scaling and negation commute exactly with every rounding
  // step in the estimator, so these are bitwise identities.
  CHECK(effective_sample_size(2.0 * x) == base);
  CHECK(effective_sample_size(-x) == base);
  CHECK(effective_sample_size(0.25 * x) == base);
  // A shift perturbs the mean subtraction at rounding level only.
  const double shifted = effective_sample_size(x.array() + 5.0);
  CHECK(std::abs(shifted - base) < 1e-9 * base);
}

TEST_CASE("ess report summarizes coordinates and floors constant rows") {
  const Eigen::Index n = 2000;
  Eigen::MatrixXd samples(3, n);
  samples.row(0) = ar1_series(n, 0.0, 59).transpose();
  samples.row(1) = ar1_series(n, 0.9, 61).transpose();
  samples.row(2).setConstant(1.5);
  const EssReport report = ess_report(samples, 2.0);
  CHECK(report.per_coordinate.size() == 3);
  CHECK(report.per_coordinate(0) > report.per_coordinate(1));
  CHECK(report.per_coordinate(2) == 1.0);
  CHECK(report.min_ess == 1.0);
  CHECK(std::abs(report.mean_ess - report.per_coordinate.mean()) < 1e-12);
  CHECK(std::abs(report.mean_per_second - report.mean_ess / 2.0) < 1e-12);
  CHECK(std::abs(report.min_per_second - 0.5) < 1e-12);
  CHECK_THROWS_AS(ess_report(samples, 0.0), invalid_argument_error);
}

TEST_CASE("acceptance rate counts moved transitions") {
  ChainTrace trace;
  trace.accepted = {1, 0, 1, 1};
  CHECK(acceptance_rate(trace) == 0.75);
  trace.accepted = {0, 0};
  CHECK(acceptance_rate(trace) == 0.0);
  trace.accepted.clear();
  CHECK_THROWS_AS(acceptance_rate(trace), invalid_argument_error);
}

TEST_CASE("intermodal jumps count assignment changes") {
  const std::vector<Eigen::VectorXd> centers = {Eigen::VectorXd::Zero(1),
                                                Eigen::VectorXd::Constant(1, 5.0)};
  // Assignments 0,0,1,1,0,1 -> 3 changes.
  const ChainTrace trace = trace_from_positions({-1.0, 1.0, 4.0, 6.0, 2.0, 5.1});
  CHECK(intermodal_jumps(trace, centers) == 3);

  std::vector<double> alternating;
  for (int i = 0; i < 10; ++i) alternating.push_back(i % 2 == 0 ? 0.5 : 4.5);
  CHECK(intermodal_jumps(trace_from_positions(alternating), centers) == 9);

  CHECK(intermodal_jumps(trace_from_positions({0.1, 1.0, 2.0, 0.3}), centers) == 0);
}

TEST_CASE("intermodal jump ties go to the lower center index") {
  const std::vector<Eigen::VectorXd> centers = {Eigen::VectorXd::Zero(1),
                                                Eigen::VectorXd::Constant(1, 5.0)};
  // 2.5 is equidistant, so it belongs to center 0.
  CHECK(intermodal_jumps(trace_from_positions({2.5, 4.0}), centers) == 1);
  CHECK(intermodal_jumps(trace_from_positions({2.5, 1.0}), centers) == 0);

  // Identical centers make every state a tie on center 0: a well defined
  // zero-jump answer no matter how the chain moves.
  const std::vector<Eigen::VectorXd> same = {Eigen::VectorXd::Zero(1),
                                             Eigen::VectorXd::Zero(1)};
  CHECK(intermodal_jumps(trace_from_positions({-3.0, 7.0, 0.0, 2.0}), same) == 0);
}

TEST_CASE("intermodal jumps are invariant under relabeling distinct centers") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> normal;
  std::vector<double> positions;
  for (int i = 0; i < 200; ++i) positions.push_back(2.5 + 3.0 * normal(rng));
  const ChainTrace trace = trace_from_positions(positions);
  const std::vector<Eigen::VectorXd> ab = {Eigen::VectorXd::Zero(1),
                                           Eigen::VectorXd::Constant(1, 5.0)};
  const std::vector<Eigen::VectorXd> ba = {ab[1], ab[0]};
  CHECK(intermodal_jumps(trace, ab) == intermodal_jumps(trace, ba));
}

TEST_CASE("intermodal jumps validate their inputs") {
  const ChainTrace trace = trace_from_positions({0.0, 1.0});
  CHECK_THROWS_AS(intermodal_jumps(trace, {Eigen::VectorXd::Zero(1)}),
                  invalid_argument_error);
  const std::vector<Eigen::VectorXd> wrong_dim = {Eigen::VectorXd::Zero(2),
                                                  Eigen::VectorXd::Constant(2, 5.0)};
  CHECK_THROWS_AS(intermodal_jumps(trace, wrong_dim), invalid_argument_error);
}

TEST_CASE("misclassification counts sign mismatches with zero predicting zero") {
  Eigen::VectorXd latent(4);
  latent << 2.0, -1.0, 0.5, -0.2;
  Eigen::VectorXi labels(4);
  labels << 1, 0, 1, 0;
  CHECK(misclassification_count(latent, labels) == 0);
  CHECK(misclassification_count(-latent, labels) == 4);

  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
  CHECK(misclassification_count(zeros, labels) == 2);

  Eigen::VectorXi short_labels(3);
  short_labels << 1, 0, 1;
  CHECK_THROWS_AS(misclassification_count(latent, short_labels), invalid_argument_error);
}

TEST_CASE("first iteration below finds the earliest qualifying index") {
  CHECK(first_iteration_below({48, 30, 9, 12}, 10).value() == 2);
  CHECK(!first_iteration_below({48, 48, 48}, 10).has_value());
  CHECK(first_iteration_below({48, 30, 9, 12}, 48).value() == 0);
  CHECK(first_iteration_below({}, 10) == std::nullopt);
  CHECK_THROWS_AS(first_iteration_below({1.0}, -1.0), invalid_argument_error);
}

TEST_CASE("normal quantile inverts the normal cdf") {
  CHECK(std::abs(normal_quantile(0.5)) < 1e-15);
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-11);
  CHECK(std::abs(normal_quantile(0.025) + 1.959963984540054) < 1e-11);
  for (double p = 0.001; p < 1.0; p += 0.007)
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-13);
  CHECK(std::abs(normal_cdf(normal_quantile(1e-10)) - 1e-10) < 1e-14);
  CHECK_THROWS_AS(normal_quantile(0.0), invalid_argument_error);
  CHECK_THROWS_AS(normal_quantile(1.0), invalid_argument_error);
}

TEST_CASE("qq points pair sorted samples with plotting-position quantiles") {
  const std::size_t n = 500;
  std::vector<double> samples;
  for (std::size_t i = 0; i < n; ++i)
    samples.push_back(normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n)));
  std::shuffle(samples.begin(), samples.end(), std::mt19937_64(71));
  const auto points = qq_points(samples, [](double p) { return normal_quantile(p); });
  REQUIRE(points.size() == n);
  for (const auto& [sample, reference] : points) CHECK(sample == reference);
  CHECK(std::abs(qq_correlation(points).value() - 1.0) < 1e-12);
}

TEST_CASE("qq correlation is high for genuine normal draws") {
  std::mt19937_64 rng(73);
  std::normal_distribution<double> normal;
  std::vector<double> samples(100000);
  for (auto& s : samples) s = normal(rng);
  const auto points = qq_points(samples, [](double p) { return normal_quantile(p); });
  CHECK(qq_correlation(points).value() > 0.999);
}

TEST_CASE("qq correlation flags degenerate inputs") {
  std::vector<double> constant(200, 3.0);
  const auto points = qq_points(constant, [](double p) { return normal_quantile(p); });
  CHECK(!qq_correlation(points).has_value());
  CHECK_THROWS_AS(qq_points(std::vector<double>(99, 0.0), [](double p) { return p; }),
                  invalid_argument_error);
}
