#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "simplicial/errors.hpp"
#include "simplicial/math.hpp"
#include "simplicial/trace.hpp"

namespace simplicial {

// Autocovariance at lags 0..N-1 with the biased 1/N normalization, computed
// by zero-padded FFT. The biased form is what the ESS truncation rule below
// expects.
inline Eigen::VectorXd autocovariance(const Eigen::Ref<const Eigen::VectorXd>& series) {
  const Index n = series.size();
  if (n < 2) throw invalid_argument_error("autocovariance: need at least 2 points");
  Index m = 1;
  while (m < 2 * n) m <<= 1;
  Eigen::VectorXd centered = series.array() - series.mean();
  std::vector<std::complex<double>> time(static_cast<std::size_t>(m), {0, 0});
  for (Index i = 0; i < n; ++i) time[static_cast<std::size_t>(i)] = centered(i);
  std::vector<std::complex<double>> freq(static_cast<std::size_t>(m));
  Eigen::FFT<double> fft;
  fft.fwd(freq, time);
  for (auto& z : freq) z = std::complex<double>(std::norm(z), 0);
  fft.inv(time, freq);
  Eigen::VectorXd gamma(n);
  for (Index k = 0; k < n; ++k)
    gamma(k) = time[static_cast<std::size_t>(k)].real() / static_cast<double>(n);
  return gamma;
}

// Initial monotone positive sequence estimator: sum autocovariances in
// adjacent pairs, truncate at the first non-positive pair sum, force the
// kept sums non-increasing, then ESS = N * gamma_0 / (2 * sum - gamma_0).
// Result is clamped to (0, N]; a negative variance estimate (possible for
// antithetic chains) also clamps to N.
inline double effective_sample_size(const Eigen::Ref<const Eigen::VectorXd>& series) {
  const Index n = series.size();
  if (n < 10) throw invalid_argument_error("effective_sample_size: need at least 10 points");
  const Eigen::VectorXd gamma = autocovariance(series);
  // A constant series rarely gives gamma_0 exactly 0: the mean subtraction
  // leaves rounding residue of order ulp(scale)^2. Compare against a floor
  // far above that residue and far below any genuine chain variance.
  const double scale = series.cwiseAbs().maxCoeff();
  const double degenerate_floor = (1e-12 * scale) * (1e-12 * scale);
  if (!(gamma(0) > degenerate_floor))
    throw undefined_ess_error("effective_sample_size: constant series");
  double paired_sum = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (Index k = 0; k + 1 < n; k += 2) {
    double pair = gamma(k) + gamma(k + 1);
    if (!(pair > 0)) break;
    pair = std::min(pair, prev);
    paired_sum += pair;
    prev = pair;
  }
  const double asymptotic_variance = 2 * paired_sum - gamma(0);
  if (!(asymptotic_variance > 0)) return static_cast<double>(n);
  const double ess = static_cast<double>(n) * gamma(0) / asymptotic_variance;
  return std::min(ess, static_cast<double>(n));
}

struct EssReport {
  Eigen::VectorXd per_coordinate;
  double mean_ess = 0;
  double min_ess = 0;
  double mean_per_second = 0;
  double min_per_second = 0;
};

// Per-coordinate ESS over the columns of a D x N sample block. A coordinate
// the chain never moved carries one draw's worth of information, so its
// undefined ESS is floored at 1 instead of aborting a whole sweep.
inline EssReport ess_report(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                            double wall_seconds) {
  if (!(wall_seconds > 0))
    throw invalid_argument_error("ess_report: wall_seconds must be positive");
  const Index d = samples.rows();
  if (d < 1) throw invalid_argument_error("ess_report: empty sample block");
  EssReport report;
  report.per_coordinate.resize(d);
  for (Index i = 0; i < d; ++i) {
    try {
      report.per_coordinate(i) = effective_sample_size(samples.row(i).transpose());
    } catch (const undefined_ess_error&) {
      report.per_coordinate(i) = 1.0;
    }
  }
  report.mean_ess = report.per_coordinate.mean();
  report.min_ess = report.per_coordinate.minCoeff();
  report.mean_per_second = report.mean_ess / wall_seconds;
  report.min_per_second = report.min_ess / wall_seconds;
  return report;
}

inline double acceptance_rate(const ChainTrace& trace) {
  if (trace.accepted.empty())
    throw invalid_argument_error("acceptance_rate: trace has no transitions");
  long moved = 0;
  for (auto flag : trace.accepted) moved += flag ? 1 : 0;
  return static_cast<double>(moved) / static_cast<double>(trace.accepted.size());
}

// Nearest-center assignment changes between consecutive states. Ties go to
// the lower center index.
inline long intermodal_jumps(const ChainTrace& trace,
                             const std::vector<Eigen::VectorXd>& centers) {
  if (centers.size() < 2)
    throw invalid_argument_error("intermodal_jumps: need at least 2 centers");
  for (const auto& c : centers)
    if (c.size() != trace.states.rows())
      throw invalid_argument_error("intermodal_jumps: center dimension mismatch");
  auto assign = [&](Index col) {
    std::size_t best = 0;
    double best_dist = (trace.states.col(col) - centers[0]).squaredNorm();
    for (std::size_t k = 1; k < centers.size(); ++k) {
      const double dist = (trace.states.col(col) - centers[k]).squaredNorm();
      if (dist < best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    return best;
  };
  long jumps = 0;
  std::size_t prev = assign(0);
  for (Index t = 1; t < trace.states.cols(); ++t) {
    const std::size_t cur = assign(t);
    if (cur != prev) ++jumps;
    prev = cur;
  }
  return jumps;
}

// Number of sign-based label mismatches; zero latent predicts label 0.
inline long misclassification_count(const Eigen::Ref<const Eigen::VectorXd>& latent,
                                    const Eigen::Ref<const Eigen::VectorXi>& labels) {
  if (latent.size() != labels.size())
    throw invalid_argument_error("misclassification_count: length mismatch");
  long count = 0;
  for (Index i = 0; i < latent.size(); ++i) {
    const bool predicted_one = latent(i) > 0;
    const bool is_one = labels(i) == 1;
    if (predicted_one != is_one) ++count;
  }
  return count;
}

inline std::optional<long> first_iteration_below(const std::vector<double>& error_series,
                                                 double threshold) {
  if (!(threshold >= 0))
    throw invalid_argument_error("first_iteration_below: threshold must be non-negative");
  for (std::size_t i = 0; i < error_series.size(); ++i)
    if (error_series[i] <= threshold) return static_cast<long>(i);
  return std::nullopt;
}

// Standard normal quantile, Acklam's rational approximation polished with
// one Halley step; |error| < 1e-13 on (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0 && p < 1))
    throw invalid_argument_error("normal_quantile: p must lie in (0, 1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Sorted samples paired with reference quantiles at plotting positions
// (i + 0.5) / N.
template <typename QuantileFn>
std::vector<std::pair<double, double>> qq_points(std::vector<double> samples,
                                                 QuantileFn&& reference_quantile) {
  if (samples.size() < 100)
    throw invalid_argument_error("qq_points: need at least 100 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::vector<std::pair<double, double>> points;
  points.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    points.emplace_back(samples[i], reference_quantile(p));
  }
  return points;
}

// Pearson correlation of the paired values; nullopt when either side is
// degenerate (constant), which callers must treat as a flagged result.
inline std::optional<double> qq_correlation(
    const std::vector<std::pair<double, double>>& points) {
  const auto n = static_cast<double>(points.size());
  if (points.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0) || !(syy > 0)) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace simplicial
