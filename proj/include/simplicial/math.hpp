#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "simplicial/errors.hpp"

namespace simplicial {

using Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum(exp(v))) with the max shifted out. All entries -inf gives -inf;
// no NaN is produced for that case.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) throw invalid_argument_error("log_sum_exp: empty input");
  const Scalar m = v.maxCoeff();
  if (!(m > -std::numeric_limits<Scalar>::infinity()))
    return -std::numeric_limits<Scalar>::infinity();
  Scalar acc = 0;
  for (Index i = 0; i < v.size(); ++i) acc += std::exp(v(i) - m);
  return m + std::log(acc);
}

// log(1 + exp(x)) without overflow for large |x|.
inline double log1p_exp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace simplicial
