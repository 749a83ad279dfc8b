#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "simplicial/diagnostics.hpp"
#include "simplicial/gp_classification.hpp"
#include "simplicial/samplers.hpp"
#include "simplicial/slice.hpp"

namespace simplicial {

// One sweep = one multiproposal (or baseline) update of the full latent
// vector, then a univariate slice pass over the four log hyperparameters in
// fixed order, then a kernel Cholesky rebuild at the accepted values. The
// outer trace records latent moves; hyperparameter values ride along as
// extras. Owns the model: one sweep kernel per chain.
class GpSweepKernel : public Kernel {
 public:
  enum class LatentFamily { kSimplicial, kRwm, kMtm };

  struct Options {
    LatentFamily family = LatentFamily::kSimplicial;
    double initial_scale = 1.0;        // edge length or proposal scale
    double target_acceptance = 0.5;    // 0.5 for simplicial, 0.234 baselines
    bool adapt_covariance = false;
    long covariance_freeze_after = std::numeric_limits<long>::max();
    Index n_tries = 0;                 // MTM only; 0 means dim + 1
    GpHyperparameters initial_hyper;
    SliceOptions slice;                // width interpreted on the log scale
  };

  GpSweepKernel(const GpSweepKernel&) = delete;
  GpSweepKernel& operator=(const GpSweepKernel&) = delete;

  GpSweepKernel(GpClassificationModel model, Options opts)
      : model_(std::move(model)), opts_(opts), latent_target_(model_) {
    if (opts.family == LatentFamily::kSimplicial) {
      SimplicialKernel::Options ko;
      ko.edge_length = opts.initial_scale;
      ko.target_acceptance = opts.target_acceptance;
      ko.adapt_covariance = opts.adapt_covariance;
      ko.covariance_freeze_after = opts.covariance_freeze_after;
      latent_kernel_ = std::make_unique<SimplicialKernel>(latent_target_, ko);
    } else if (opts.family == LatentFamily::kRwm) {
      RwmKernel::Options ko;
      ko.scale = opts.initial_scale;
      ko.target_acceptance = opts.target_acceptance;
      ko.adapt_covariance = opts.adapt_covariance;
      ko.covariance_freeze_after = opts.covariance_freeze_after;
      latent_kernel_ = std::make_unique<RwmKernel>(latent_target_, ko);
    } else {
      MtmKernel::Options ko;
      ko.n_tries = opts.n_tries;
      ko.scale = opts.initial_scale;
      ko.target_acceptance = opts.target_acceptance;
      ko.adapt_covariance = opts.adapt_covariance;
      ko.covariance_freeze_after = opts.covariance_freeze_after;
      latent_kernel_ = std::make_unique<MtmKernel>(latent_target_, ko);
    }
    model_.set_hyper(opts.initial_hyper);
  }

  Index dim() const override { return model_.latent_dim(); }
  const Target& target() const override { return latent_target_; }
  const GpClassificationModel& model() const { return model_; }
  long slice_expansion_caps() const { return slice_expansion_caps_; }

  StepOutcome advance(ChainState& state, RngEngine& rng) override {
    const StepOutcome outcome = latent_kernel_->advance(state, rng);

    GpHyperparameters h = model_.hyper();
    for (int i = 0; i < 4; ++i) {
      const double phi = std::log(h.component(i));
      auto conditional = [&](double candidate_phi) {
        GpHyperparameters candidate = h;
        candidate.component(i) = std::exp(candidate_phi);
        // + candidate_phi is the log-scale Jacobian
        return model_.hyper_conditional(candidate, state.position) + candidate_phi;
      };
      const SliceResult result = slice_step_univariate(phi, conditional, opts_.slice, rng);
      if (result.expansion_capped) ++slice_expansion_caps_;
      h.component(i) = std::exp(result.value);
    }
    model_.set_hyper(h);
    // Hyperparameters moved under the latents, so the cached density is
    // stale; refresh it against the new kernel.
    state.log_density = model_.latent_log_density(state.position);
    return outcome;
  }

  std::vector<std::string> extra_names() const override {
    return {"eta2", "xi2", "rho2", "sigma2", "misclassification", "latent_scale"};
  }
  void append_extras(const ChainState& state, double* out) const override {
    const GpHyperparameters& h = model_.hyper();
    out[0] = h.eta2;
    out[1] = h.xi2;
    out[2] = h.rho2;
    out[3] = h.sigma2;
    out[4] = static_cast<double>(misclassification_count(state.position, model_.labels()));
    double scale = 0;
    latent_kernel_->append_extras(state, &scale);
    out[5] = scale;
  }

 private:
  GpClassificationModel model_;
  Options opts_;
  GpLatentTarget latent_target_;
  std::unique_ptr<Kernel> latent_kernel_;
  long slice_expansion_caps_ = 0;
};

}  // namespace simplicial
