#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "simplicial/errors.hpp"
#include "simplicial/geometry.hpp"
#include "simplicial/math.hpp"

namespace simplicial {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

// Log target density up to inclusion of normalizing constants. -inf encodes
// zero density; NaN is never returned.
class Target {
 public:
  virtual ~Target() = default;
  virtual Index dim() const = 0;
  virtual double log_density(const Eigen::Ref<const Eigen::VectorXd>& point) const = 0;
  virtual std::string name() const = 0;
};

enum class CovarianceKind { kSpherical, kDiagonal, kFull };

// Gaussian with one of three covariance structures. Construction goes
// through the factories below, which precompute the Cholesky root and log
// determinant so evaluation never factorizes.
struct GaussianSpec {
  Eigen::VectorXd mean;
  CovarianceKind kind = CovarianceKind::kSpherical;
  double spherical_variance = 1;
  Eigen::VectorXd diagonal_variances;
  Eigen::MatrixXd covariance;  // full only
  Eigen::MatrixXd root;        // lower Cholesky factor of covariance, full only
  double log_det = 0;          // log |covariance|

  Index dim() const { return mean.size(); }

  static GaussianSpec spherical(Index dim, double variance = 1,
                                Eigen::VectorXd mean = Eigen::VectorXd()) {
    if (dim < 1) throw invalid_argument_error("GaussianSpec: dim must be positive");
    if (!(variance > 0)) throw invalid_argument_error("GaussianSpec: variance must be positive");
    GaussianSpec g;
    g.mean = mean.size() ? std::move(mean) : Eigen::VectorXd::Zero(dim).eval();
    if (g.mean.size() != dim) throw invalid_argument_error("GaussianSpec: mean size mismatch");
    g.kind = CovarianceKind::kSpherical;
    g.spherical_variance = variance;
    g.log_det = static_cast<double>(dim) * std::log(variance);
    return g;
  }

  static GaussianSpec diagonal(Eigen::VectorXd variances,
                               Eigen::VectorXd mean = Eigen::VectorXd()) {
    const Index dim = variances.size();
    if (dim < 1) throw invalid_argument_error("GaussianSpec: empty variance vector");
    if (!(variances.minCoeff() > 0))
      throw invalid_argument_error("GaussianSpec: variances must be positive");
    GaussianSpec g;
    g.mean = mean.size() ? std::move(mean) : Eigen::VectorXd::Zero(dim).eval();
    if (g.mean.size() != dim) throw invalid_argument_error("GaussianSpec: mean size mismatch");
    g.kind = CovarianceKind::kDiagonal;
    g.diagonal_variances = std::move(variances);
    g.log_det = g.diagonal_variances.array().log().sum();
    return g;
  }

  static GaussianSpec full(Eigen::MatrixXd covariance,
                           Eigen::VectorXd mean = Eigen::VectorXd()) {
    GaussianSpec g;
    auto chol = spd_root(covariance);  // validates symmetry and positivity
    const Index dim = covariance.rows();
    g.mean = mean.size() ? std::move(mean) : Eigen::VectorXd::Zero(dim).eval();
    if (g.mean.size() != dim) throw invalid_argument_error("GaussianSpec: mean size mismatch");
    g.kind = CovarianceKind::kFull;
    g.covariance = std::move(covariance);
    g.root = std::move(chol.matrix);
    g.log_det = 2 * g.root.diagonal().array().log().sum();
    return g;
  }

  // Eigenvalues exactly 1..dim on the axes.
  static GaussianSpec ill_conditioned_diagonal(Index dim) {
    return diagonal(Eigen::VectorXd::LinSpaced(dim, 1, static_cast<double>(dim)));
  }

  // Spectrum 1..dim under a random orthogonal conjugation; symmetrized so
  // spd_root's symmetry check passes exactly.
  template <typename Rng>
  static GaussianSpec ill_conditioned_full(Index dim, Rng& rng) {
    Eigen::MatrixXd u = haar_orthogonal(dim, rng);
    Eigen::MatrixXd c =
        u * Eigen::VectorXd::LinSpaced(dim, 1, static_cast<double>(dim)).asDiagonal() *
        u.transpose();
    c = ((c + c.transpose()) / 2).eval();
    return full(std::move(c));
  }
};

inline double gaussian_log_density(const GaussianSpec& g,
                                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != g.dim())
    throw invalid_argument_error("gaussian_log_density: dimension mismatch");
  if (x.hasNaN()) return kNegInf;
  double quad = 0;
  switch (g.kind) {
    case CovarianceKind::kSpherical:
      quad = (x - g.mean).squaredNorm() / g.spherical_variance;
      break;
    case CovarianceKind::kDiagonal:
      quad = ((x - g.mean).array().square() / g.diagonal_variances.array()).sum();
      break;
    case CovarianceKind::kFull:
      quad = g.root.triangularView<Eigen::Lower>().solve(x - g.mean).squaredNorm();
      break;
  }
  const double value =
      -0.5 * (quad + g.log_det + static_cast<double>(g.dim()) * kLogTwoPi);
  return std::isnan(value) ? kNegInf : value;
}

struct MixtureSpec {
  struct Component {
    double weight;
    GaussianSpec gaussian;
  };
  std::vector<Component> components;

  Index dim() const { return components.empty() ? 0 : components.front().gaussian.dim(); }
};

inline MixtureSpec make_mixture(std::vector<MixtureSpec::Component> components) {
  if (components.empty()) throw invalid_argument_error("make_mixture: no components");
  const Index dim = components.front().gaussian.dim();
  double total = 0;
  for (const auto& c : components) {
    if (c.gaussian.dim() != dim)
      throw invalid_argument_error("make_mixture: component dimension mismatch");
    if (!(c.weight > 0)) throw invalid_argument_error("make_mixture: weights must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw invalid_argument_error("make_mixture: weights must sum to 1");
  return {std::move(components)};
}

inline double mixture_log_density(const MixtureSpec& m,
                                  const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != m.dim())
    throw invalid_argument_error("mixture_log_density: dimension mismatch");
  Eigen::VectorXd terms(static_cast<Index>(m.components.size()));
  for (Index k = 0; k < terms.size(); ++k) {
    const auto& c = m.components[static_cast<std::size_t>(k)];
    terms(k) = std::log(c.weight) + gaussian_log_density(c.gaussian, x);
  }
  return log_sum_exp(terms);
}

class GaussianTarget : public Target {
 public:
  GaussianTarget(GaussianSpec spec, std::string name = "gaussian")
      : spec_(std::move(spec)), name_(std::move(name)) {}

  Index dim() const override { return spec_.dim(); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    return gaussian_log_density(spec_, x);
  }
  std::string name() const override { return name_; }
  const GaussianSpec& spec() const { return spec_; }

 private:
  GaussianSpec spec_;
  std::string name_;
};

class MixtureTarget : public Target {
 public:
  MixtureTarget(MixtureSpec spec, std::string name = "gaussian_mixture")
      : spec_(std::move(spec)), name_(std::move(name)) {}

  Index dim() const override { return spec_.dim(); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    return mixture_log_density(spec_, x);
  }
  std::string name() const override { return name_; }
  const MixtureSpec& spec() const { return spec_; }

  std::vector<Eigen::VectorXd> mode_centers() const {
    std::vector<Eigen::VectorXd> centers;
    centers.reserve(spec_.components.size());
    for (const auto& c : spec_.components) centers.push_back(c.gaussian.mean);
    return centers;
  }

 private:
  MixtureSpec spec_;
  std::string name_;
};

// Flat density on [-halfwidth, halfwidth]^dim. Exercises the equal-weight
// selection paths in tests.
class BoxUniformTarget : public Target {
 public:
  BoxUniformTarget(Index dim, double halfwidth) : dim_(dim), halfwidth_(halfwidth) {
    if (dim < 1) throw invalid_argument_error("BoxUniformTarget: dim must be positive");
    if (!(halfwidth > 0)) throw invalid_argument_error("BoxUniformTarget: halfwidth must be positive");
  }

  Index dim() const override { return dim_; }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    if (x.size() != dim_) throw invalid_argument_error("BoxUniformTarget: dimension mismatch");
    if (x.hasNaN()) return kNegInf;
    return (x.cwiseAbs().maxCoeff() <= halfwidth_) ? 0.0 : kNegInf;
  }
  std::string name() const override { return "box_uniform"; }

 private:
  Index dim_;
  double halfwidth_;
};

// Two equal-weight spherical components at 0 and offset*1.
inline MixtureSpec two_mode_mixture(Index dim, double offset, double weight_first = 0.5) {
  std::vector<MixtureSpec::Component> comps;
  comps.push_back({weight_first, GaussianSpec::spherical(dim)});
  comps.push_back({1.0 - weight_first,
                   GaussianSpec::spherical(dim, 1.0, Eigen::VectorXd::Constant(dim, offset))});
  return make_mixture(std::move(comps));
}

}  // namespace simplicial
