#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <type_traits>
#include <utility>

#include "simplicial/errors.hpp"
#include "simplicial/math.hpp"

namespace simplicial {

// Haar-uniform orthogonal matrix: QR of an iid standard Gaussian matrix with
// each column of Q re-signed by the sign of the matching diagonal entry of R.
// Without the sign fix the factorization is non-unique and the law is biased.
// dim == 1 gives the scalar +-1 with probability 1/2 each.
template <typename Scalar = double, typename Rng>
MatrixX<Scalar> haar_orthogonal(Index dim, Rng& rng) {
  if (dim < 1) throw invalid_argument_error("haar_orthogonal: dim must be positive");
  std::normal_distribution<Scalar> gauss(0, 1);
  MatrixX<Scalar> g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
  MatrixX<Scalar> q = qr.householderQ();
  const auto r_diag = qr.matrixQR().diagonal();
  for (Index j = 0; j < dim; ++j)
    if (r_diag(j) < Scalar(0)) q.col(j) = -q.col(j);
  return q;
}

// The first `rows` rows of a Haar-orthogonal dim x dim matrix, without ever
// forming it: QR of a dim x rows Gaussian matrix gives a uniformly
// distributed orthonormal `rows`-frame in R^dim (same sign fix as above),
// and its transpose has the law of the leading rows of a Haar matrix by
// invariance. Cost O(dim * rows^2) instead of O(dim^3).
template <typename Scalar = double, typename Rng>
MatrixX<Scalar> haar_frame_rows(Index rows, Index dim, Rng& rng) {
  if (rows < 1 || dim < rows)
    throw invalid_argument_error("haar_frame_rows: need 1 <= rows <= dim");
  std::normal_distribution<Scalar> gauss(0, 1);
  MatrixX<Scalar> g(dim, rows);
  for (Index j = 0; j < rows; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
  MatrixX<Scalar> q = qr.householderQ() * MatrixX<Scalar>::Identity(dim, rows);
  const auto r_diag = qr.matrixQR().diagonal();
  for (Index j = 0; j < rows; ++j)
    if (r_diag(j) < Scalar(0)) q.col(j) = -q.col(j);
  return q.transpose();
}

// Regular simplex with dim+1 vertices in R^dim, one vertex exactly at the
// origin, every pairwise distance equal to edge_length. Columns are
// vertices; the origin vertex is the last column.
template <typename Scalar>
struct SimplexVertexSet {
  Index dim = 0;           // ambient dimension (rows of vertices)
  Scalar edge_length = 1;  // pairwise vertex distance
  MatrixX<Scalar> vertices;

  Index vertex_count() const { return vertices.cols(); }
};

// Construction: {e_1, ..., e_dim, a*1} with a = (1 - sqrt(dim+1))/dim is
// regular with edge sqrt(2); subtracting a*1 moves the extra vertex to the
// origin and scaling by edge_length/sqrt(2) sets the edge.
template <typename Scalar = double>
SimplexVertexSet<Scalar> regular_simplex(Index dim, Scalar edge_length) {
  if (dim < 1) throw invalid_argument_error("regular_simplex: dim must be positive");
  if (!(edge_length > Scalar(0)))
    throw invalid_argument_error("regular_simplex: edge_length must be positive");
  const Scalar a = (Scalar(1) - std::sqrt(Scalar(dim + 1))) / Scalar(dim);
  const Scalar c = edge_length / std::sqrt(Scalar(2));
  MatrixX<Scalar> v = MatrixX<Scalar>::Constant(dim, dim + 1, -a * c);
  v.diagonal().array() += c;
  v.col(dim).setZero();
  return {dim, edge_length, std::move(v)};
}

// Zero-pad simplex vertices into a higher ambient dimension. Pairwise
// distances and the origin vertex are unchanged, so the result is still a
// regular simplex, now with fewer vertices than ambient_dim + 1.
template <typename Scalar>
SimplexVertexSet<Scalar> embed_simplex(const SimplexVertexSet<Scalar>& base,
                                       Index ambient_dim) {
  if (ambient_dim < base.dim)
    throw invalid_argument_error("embed_simplex: ambient_dim smaller than simplex dim");
  MatrixX<Scalar> v = MatrixX<Scalar>::Zero(ambient_dim, base.vertex_count());
  v.topRows(base.dim) = base.vertices;
  return {ambient_dim, base.edge_length, std::move(v)};
}

// Lower-triangular root L with L * L^T equal to the covariance it came from.
template <typename Scalar>
struct PreconditionRoot {
  MatrixX<Scalar> matrix;  // lower triangular

  Index dim() const { return matrix.rows(); }
};

// Cholesky root of a symmetric positive definite matrix, with explicit
// symmetry and positive-definiteness checks (Eigen's LLT does not reject
// asymmetric input on its own).
template <typename Derived>
PreconditionRoot<typename Derived::Scalar> spd_root(const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  if (c.rows() != c.cols() || c.rows() < 1)
    throw invalid_argument_error("spd_root: matrix must be square and non-empty");
  const Scalar scale = c.cwiseAbs().maxCoeff();
  const Scalar tol = Scalar(1e-10) * std::max(Scalar(1), scale);
  if (((c - c.transpose()).cwiseAbs().maxCoeff()) > tol)
    throw invalid_argument_error("spd_root: matrix is not symmetric");
  Eigen::LLT<MatrixX<Scalar>> llt(c);
  if (llt.info() != Eigen::Success)
    throw not_positive_definite_error("spd_root: matrix is not positive definite");
  return {MatrixX<Scalar>(llt.matrixL())};
}

// sqrt of a chi-square(dim) draw. Used to stretch a simplex so the proposal
// marginal over a uniformly rotated vertex matches an isotropic Gaussian.
template <typename Scalar = double, typename Rng>
Scalar chi_square_edge_scale(Index dim, Rng& rng) {
  if (dim < 1) throw invalid_argument_error("chi_square_edge_scale: dim must be positive");
  std::chi_squared_distribution<Scalar> chi2(static_cast<Scalar>(dim));
  return std::sqrt(chi2(rng));
}

// Affine image of the simplex: column d of the result is
//   root * (scale * rotation * v_d) + center.
// The origin vertex lands on center exactly. rotation may be rectangular
// (rows x base.dim) when only a projected image is needed; pass root =
// nullptr for the identity.
template <typename Scalar, typename DerivedR, typename DerivedC>
MatrixX<Scalar> map_simplex(const SimplexVertexSet<Scalar>& base,
                            const Eigen::MatrixBase<DerivedR>& rotation, Scalar scale,
                            const PreconditionRoot<std::type_identity_t<Scalar>>* root,
                            const Eigen::MatrixBase<DerivedC>& center) {
  if (rotation.cols() != base.dim)
    throw invalid_argument_error("map_simplex: rotation columns must match simplex dim");
  if (center.size() != rotation.rows())
    throw invalid_argument_error("map_simplex: center size must match rotation rows");
  if (root && root->dim() != rotation.rows())
    throw invalid_argument_error("map_simplex: root size must match rotation rows");
  MatrixX<Scalar> out = rotation * base.vertices;
  out *= scale;
  if (root)
    out = root->matrix.template triangularView<Eigen::Lower>() * out;
  out.colwise() += center.derived();
  return out;
}

}  // namespace simplicial
