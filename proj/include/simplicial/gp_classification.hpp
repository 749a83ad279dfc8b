#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "simplicial/errors.hpp"
#include "simplicial/math.hpp"
#include "simplicial/targets.hpp"

namespace simplicial {

// Kernel hyperparameters: amplitude eta2, constant offset xi2, inverse
// squared length-scale rho2, nugget sigma2. All strictly positive.
struct GpHyperparameters {
  double eta2 = 1;
  double xi2 = 1;
  double rho2 = 1;
  double sigma2 = 1;

  double& component(int i) {
    switch (i) {
      case 0: return eta2;
      case 1: return xi2;
      case 2: return rho2;
      default: return sigma2;
    }
  }
  double component(int i) const {
    return const_cast<GpHyperparameters*>(this)->component(i);
  }
  bool all_positive() const { return eta2 > 0 && xi2 > 0 && rho2 > 0 && sigma2 > 0; }
};

inline const char* gp_hyper_name(int i) {
  switch (i) {
    case 0: return "eta2";
    case 1: return "xi2";
    case 2: return "rho2";
    default: return "sigma2";
  }
}

// Pairwise squared Euclidean distances between rows, mirrored so the result
// is exactly symmetric.
inline Eigen::MatrixXd pairwise_squared_distances(
    const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const Index n = x.rows();
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double d = (x.row(i) - x.row(j)).squaredNorm();
      d2(i, j) = d;
      d2(j, i) = d;
    }
  return d2;
}

// K_ij = xi2 + eta2 * exp(-rho2 * ||x_i - x_j||^2) + sigma2 * delta_ij,
// elementwise over a symmetric distance matrix, so the output is exactly
// symmetric.
inline void gp_kernel_from_squared_distances(
    const Eigen::Ref<const Eigen::MatrixXd>& d2, const GpHyperparameters& h,
    Eigen::MatrixXd& k) {
  k = (d2.array() * (-h.rho2)).exp() * h.eta2 + h.xi2;
  k.diagonal().array() += h.sigma2;
}

// Verified kernel build: rejects non-positive hyperparameters and checks the
// result factorizes. Evaluation hot paths use the unchecked form above
// with their own factorization.
inline Eigen::MatrixXd gp_kernel(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                 const GpHyperparameters& h) {
  if (!h.all_positive())
    throw invalid_argument_error("gp_kernel: hyperparameters must be positive");
  Eigen::MatrixXd k;
  gp_kernel_from_squared_distances(pairwise_squared_distances(x), h, k);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success)
    throw not_positive_definite_error("gp_kernel: kernel matrix failed Cholesky");
  return k;
}

// Binary GP classification with a logit link: labels y in {0,1}, latent
// field theta with prior N(0, K(hyper)). Holds the kernel Cholesky for the
// current hyperparameters; one instance serves one chain (the conditional
// evaluators reuse internal scratch buffers).
class GpClassificationModel {
 public:
  GpClassificationModel(Eigen::MatrixXd predictors, Eigen::VectorXi labels,
                        const GpHyperparameters& start = GpHyperparameters{})
      : x_(std::move(predictors)), labels_(std::move(labels)) {
    if (x_.rows() != labels_.size())
      throw invalid_argument_error("GpClassificationModel: predictor/label row mismatch");
    if (x_.rows() < 2)
      throw invalid_argument_error("GpClassificationModel: need at least 2 observations");
    for (Index i = 0; i < labels_.size(); ++i)
      if (labels_(i) != 0 && labels_(i) != 1)
        throw invalid_argument_error("GpClassificationModel: labels must be 0 or 1");
    d2_ = pairwise_squared_distances(x_);
    set_hyper(start);
  }

  Index latent_dim() const { return labels_.size(); }
  const GpHyperparameters& hyper() const { return hyper_; }
  const Eigen::VectorXi& labels() const { return labels_; }
  const Eigen::MatrixXd& predictors() const { return x_; }

  // Rebuild the cached kernel Cholesky for new hyperparameters.
  void set_hyper(const GpHyperparameters& h) {
    if (!h.all_positive())
      throw invalid_argument_error("GpClassificationModel: hyperparameters must be positive");
    gp_kernel_from_squared_distances(d2_, h, kernel_);
    llt_.compute(kernel_);
    if (llt_.info() != Eigen::Success)
      throw not_positive_definite_error("GpClassificationModel: kernel failed Cholesky");
    log_det_ = 2 * llt_.matrixLLT().diagonal().array().log().sum();
    hyper_ = h;
  }

  // Bernoulli-logit likelihood plus the N(0, K) prior, kernel normalizer
  // included.
  double latent_log_density(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
    if (theta.size() != latent_dim())
      throw invalid_argument_error("latent_log_density: dimension mismatch");
    if (theta.hasNaN()) return kNegInf;
    double likelihood = 0;
    for (Index i = 0; i < theta.size(); ++i)
      likelihood += (labels_(i) == 1 ? theta(i) : 0.0) - log1p_exp(theta(i));
    const double quad = llt_.matrixL().solve(theta).squaredNorm();
    const double n = static_cast<double>(latent_dim());
    const double value = likelihood - 0.5 * (quad + log_det_ + n * kLogTwoPi);
    return std::isnan(value) ? kNegInf : value;
  }

  // Independent log-normal(0, 3^2) prior on each hyperparameter.
  static double log_hyper_prior(const GpHyperparameters& h) {
    double total = 0;
    for (int i = 0; i < 4; ++i) {
      const double v = h.component(i);
      if (!(v > 0)) return kNegInf;
      const double lv = std::log(v);
      total += -lv - std::log(3.0) - 0.5 * kLogTwoPi - lv * lv / 18.0;
    }
    return total;
  }

  // log N(theta; 0, K(candidate)) + log prior(candidate). Kernel build or
  // factorization failure is zero density (-inf), not an error: the slice
  // sampler treats such candidates as outside the slice.
  double hyper_conditional(const GpHyperparameters& candidate,
                           const Eigen::Ref<const Eigen::VectorXd>& theta) const {
    if (theta.size() != latent_dim())
      throw invalid_argument_error("hyper_conditional: dimension mismatch");
    const double prior = log_hyper_prior(candidate);
    if (!(prior > kNegInf)) return kNegInf;
    if (!(candidate.eta2 < kHyperCap && candidate.xi2 < kHyperCap &&
          candidate.rho2 < kHyperCap && candidate.sigma2 < kHyperCap))
      return kNegInf;
    gp_kernel_from_squared_distances(d2_, candidate, scratch_kernel_);
    scratch_llt_.compute(scratch_kernel_);
    if (scratch_llt_.info() != Eigen::Success) return kNegInf;
    const double log_det =
        2 * scratch_llt_.matrixLLT().diagonal().array().log().sum();
    const double quad = scratch_llt_.matrixL().solve(theta).squaredNorm();
    const double n = static_cast<double>(latent_dim());
    const double value = -0.5 * (quad + log_det + n * kLogTwoPi) + prior;
    return std::isnan(value) ? kNegInf : value;
  }

 private:
  // Caps kernel entries well below overflow; the prior mass beyond e^600 is
  // zero to double precision anyway.
  static constexpr double kHyperCap = 1e260;

  Eigen::MatrixXd x_;
  Eigen::VectorXi labels_;
  Eigen::MatrixXd d2_;
  GpHyperparameters hyper_;
  Eigen::MatrixXd kernel_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0;
  mutable Eigen::MatrixXd scratch_kernel_;
  mutable Eigen::LLT<Eigen::MatrixXd> scratch_llt_;
};

// Target view over the latent vector under the model's current
// hyperparameters. The model outlives and is mutated between kernel steps by
// the sweep kernel; density values are only comparable within one sweep.
class GpLatentTarget : public Target {
 public:
  explicit GpLatentTarget(const GpClassificationModel& model) : model_(&model) {}

  Index dim() const override { return model_->latent_dim(); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& theta) const override {
    return model_->latent_log_density(theta);
  }
  std::string name() const override { return "gp_classification_latents"; }

 private:
  const GpClassificationModel* model_;
};

}  // namespace simplicial
