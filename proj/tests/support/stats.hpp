#pragma once

// Statistical helpers for the test suites: independent, deliberately naive
// implementations used as oracles against the library's optimized paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "simplicial/diagnostics.hpp"
#include "simplicial/math.hpp"

namespace test_support {

using Eigen::Index;

// O(N^2)-style direct autocovariance (biased, 1/N), no FFT.
inline Eigen::VectorXd brute_autocovariance(const Eigen::VectorXd& series, Index max_lag) {
  const Index n = series.size();
  const double mean = series.mean();
  Eigen::VectorXd gamma(max_lag + 1);
  for (Index k = 0; k <= max_lag; ++k) {
    double acc = 0;
    for (Index t = 0; t + k < n; ++t) acc += (series(t) - mean) * (series(t + k) - mean);
    gamma(k) = acc / static_cast<double>(n);
  }
  return gamma;
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    stat = std::max(stat, std::max(std::abs(f - lo), std::abs(hi - f)));
  }
  return stat;
}

// Asymptotic KS critical value; c(alpha) = sqrt(-ln(alpha/2)/2).
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-std::log(alpha / 2) / 2) / std::sqrt(static_cast<double>(n));
}

inline double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double stat = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    stat = std::max(stat, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return stat;
}

inline double ks_two_sample_critical(double alpha, std::size_t na, std::size_t nb) {
  const double a = static_cast<double>(na);
  const double b = static_cast<double>(nb);
  return std::sqrt(-std::log(alpha / 2) / 2) * std::sqrt((a + b) / (a * b));
}

inline double mean_of(const std::vector<double>& v) {
  double acc = 0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One-sided paired t statistic for mean(a - b) > 0.
inline double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double m = mean_of(diff);
  const double sd = std::sqrt(variance_of(diff));
  return m / (sd / std::sqrt(static_cast<double>(diff.size())));
}

// Two-sample z statistic for equality of proportions.
inline double proportion_z_statistic(double successes_a, double n_a, double successes_b,
                                     double n_b) {
  const double pooled = (successes_a + successes_b) / (n_a + n_b);
  const double se = std::sqrt(pooled * (1 - pooled) * (1 / n_a + 1 / n_b));
  return ((successes_a / n_a) - (successes_b / n_b)) / se;
}

}  // namespace test_support
