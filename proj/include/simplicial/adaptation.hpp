#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>

#include "simplicial/errors.hpp"
#include "simplicial/geometry.hpp"
#include "simplicial/math.hpp"

namespace simplicial {

// Joint state for the two adaptation schemes a kernel may run: Robbins-Monro
// tuning of the log edge length (or proposal scale) toward a target
// acceptance rate, and a running-covariance preconditioner with an epsilon
// ridge. Both diminish: the scale updates shrink as step_count^-decay, and
// the covariance freezes after freeze_after updates.
struct AdaptationState {
  double target_acceptance = 0.675;
  double log_edge_length = 0;
  double decay_exponent = 0.6;
  long step_count = 0;

  bool covariance_enabled = false;
  double covariance_epsilon = 1e-6;
  long refresh_interval = 100;
  long freeze_after = std::numeric_limits<long>::max();
  long sample_count = 0;
  Eigen::VectorXd running_mean;
  Eigen::MatrixXd running_m2;  // sum of centered outer products
  std::optional<PreconditionRoot<double>> root;

  double edge_length() const { return std::exp(log_edge_length); }
};

inline void adapt_edge_length(AdaptationState& a, bool accepted) {
  ++a.step_count;
  const double gain = std::pow(static_cast<double>(a.step_count), -a.decay_exponent);
  a.log_edge_length += gain * ((accepted ? 1.0 : 0.0) - a.target_acceptance);
}

// Running covariance plus the epsilon ridge; valid (and SPD) from the first
// update on.
inline Eigen::MatrixXd running_covariance(const AdaptationState& a) {
  if (a.running_mean.size() == 0)
    throw invalid_argument_error("running_covariance: no samples seen");
  const Index d = a.running_mean.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
  if (a.sample_count > 1) c = a.running_m2 / static_cast<double>(a.sample_count - 1);
  c.diagonal().array() += a.covariance_epsilon;
  return c;
}

// Welford update of the running mean/covariance, refreshed into a Cholesky
// root every refresh_interval samples once at least 2*dim samples have been
// seen. No-op after freeze_after samples.
inline void adapt_covariance(AdaptationState& a,
                             const Eigen::Ref<const Eigen::VectorXd>& position) {
  if (!a.covariance_enabled || a.sample_count >= a.freeze_after) return;
  const Index d = position.size();
  if (a.running_mean.size() == 0) {
    a.running_mean = Eigen::VectorXd::Zero(d);
    a.running_m2 = Eigen::MatrixXd::Zero(d, d);
  }
  if (a.running_mean.size() != d)
    throw invalid_argument_error("adapt_covariance: dimension changed mid-run");
  ++a.sample_count;
  const double n = static_cast<double>(a.sample_count);
  const Eigen::VectorXd delta = position - a.running_mean;
  a.running_mean += delta / n;
  a.running_m2 += ((n - 1) / n) * delta * delta.transpose();
  const bool warm = a.sample_count >= std::max<long>(2 * d, 2);
  if (warm && a.sample_count % a.refresh_interval == 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(running_covariance(a));
    // The ridge keeps this from failing in practice; on failure keep the
    // previous root rather than poisoning the kernel.
    if (llt.info() == Eigen::Success)
      a.root = PreconditionRoot<double>{Eigen::MatrixXd(llt.matrixL())};
  }
}

}  // namespace simplicial
