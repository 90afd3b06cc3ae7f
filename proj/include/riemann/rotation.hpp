#pragma once

#include "riemann/core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

namespace riemann {

template <typename Scalar> struct RotationTolerance {
  static constexpr Scalar orthogonality = Scalar(1e-10);
  static constexpr Scalar determinant = Scalar(1e-8);
  static constexpr Scalar skewness = Scalar(1e-12);
  // drift above which a produced rotation is re-orthonormalized
  static constexpr Scalar drift = Scalar(1e-12);
};

template <typename Derived>
typename Derived::Scalar orthogonality_residual(const Eigen::MatrixBase<Derived> &M) {
  using Scalar = typename Derived::Scalar;
  return (M.transpose() * M - Matrix<Scalar>::Identity(M.cols(), M.cols())).norm();
}

/// Nearest orthogonal matrix (orthogonal polar factor U V^T of the SVD).
template <typename Scalar>
Matrix<Scalar> orthonormalize_polar(const Matrix<Scalar> &M) {
  Eigen::JacobiSVD<Matrix<Scalar>> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// An element of SO(n).
template <typename Scalar> class Rotation {
public:
  explicit Rotation(Matrix<Scalar> theta) : theta_(std::move(theta)) {
    if (theta_.rows() != theta_.cols() || theta_.rows() < 1)
      throw Error(ErrorCode::InvalidArgument, "rotation must be square");
    if (orthogonality_residual(theta_) > RotationTolerance<Scalar>::orthogonality)
      throw Error(ErrorCode::InvalidArgument, "rotation must be orthogonal");
    if (std::abs(theta_.determinant() - Scalar(1)) >
        RotationTolerance<Scalar>::determinant)
      throw Error(ErrorCode::InvalidArgument, "rotation must have determinant +1");
  }

  static Rotation identity(Eigen::Index n) {
    return Rotation(Matrix<Scalar>::Identity(n, n));
  }

  /// Builds a rotation from a nearly orthogonal matrix, re-orthonormalizing
  /// only when the drift exceeds the tolerance.
  static Rotation from_nearly_orthogonal(Matrix<Scalar> M) {
    if (orthogonality_residual(M) > RotationTolerance<Scalar>::drift)
      M = orthonormalize_polar(M);
    return Rotation(std::move(M));
  }

  const Matrix<Scalar> &mat() const { return theta_; }
  Eigen::Index size() const { return theta_.rows(); }

  bool operator==(const Rotation &other) const { return theta_ == other.theta_; }

private:
  Matrix<Scalar> theta_;
};

template <typename Derived>
bool is_skew(const Eigen::MatrixBase<Derived> &X) {
  using Scalar = typename Derived::Scalar;
  return X.rows() == X.cols() &&
         (X + X.transpose()).norm() <= RotationTolerance<Scalar>::skewness;
}

/// The metric <X, Y> = -tr(XY) on so(n).  For skew matrices this is the
/// Frobenius inner product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar skew_inner(const Eigen::MatrixBase<DerivedA> &X,
                                     const Eigen::MatrixBase<DerivedB> &Y) {
  return -(X * Y).trace();
}

template <typename Scalar> Scalar skew_dimension(Eigen::Index n) {
  return Scalar(n * (n - 1) / 2);
}

/// E_ij: +1 at (i, j), -1 at (j, i).
template <typename Scalar>
Matrix<Scalar> skew_basis(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Matrix<Scalar> E = Matrix<Scalar>::Zero(n, n);
  E(i, j) = Scalar(1);
  E(j, i) = Scalar(-1);
  return E;
}

/// Coefficients x^{ij}, i < j, in row-major order of the upper triangle.
template <typename Scalar>
Vector<Scalar> skew_to_coefficients(const Matrix<Scalar> &X) {
  const Eigen::Index n = X.rows();
  Vector<Scalar> v(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      v(k++) = X(i, j);
  return v;
}

template <typename Scalar>
Matrix<Scalar> coefficients_to_skew(const Vector<Scalar> &v, Eigen::Index n) {
  if (v.size() != n * (n - 1) / 2)
    throw Error(ErrorCode::InvalidArgument, "wrong number of skew coefficients");
  Matrix<Scalar> X = Matrix<Scalar>::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      X(i, j) = v(k);
      X(j, i) = -v(k);
      ++k;
    }
  return X;
}

/// e^{tX} by scaling and squaring with a Pade approximant.
template <typename Scalar>
Rotation<Scalar> skew_exp(const Matrix<Scalar> &X, ScalarArg<Scalar> t) {
  if (!is_skew(X))
    throw Error(ErrorCode::InvalidArgument, "generator must be skew-symmetric");
  const Matrix<Scalar> scaled = t * X;
  return Rotation<Scalar>::from_nearly_orthogonal(scaled.exp());
}

/// The geodesic t -> Theta e^{tX} (X in left-translated algebra coordinates).
template <typename Scalar>
Rotation<Scalar> so_geodesic(const Rotation<Scalar> &theta,
                             const MatrixArg<Scalar> &X, ScalarArg<Scalar> t) {
  if (t == Scalar(0))
    return theta;
  return Rotation<Scalar>::from_nearly_orthogonal(theta.mat() *
                                                  skew_exp(X, t).mat());
}

/// Parallel translation of Y along e^{tX}, in algebra coordinates:
/// Y -> e^{-(t/2)X} Y e^{(t/2)X}.
template <typename Scalar>
Matrix<Scalar> so_transport(const Matrix<Scalar> &Y, const MatrixArg<Scalar> &X,
                            ScalarArg<Scalar> t) {
  if (!is_skew(Y))
    throw Error(ErrorCode::InvalidArgument, "transported vector must be skew");
  if (t == Scalar(0))
    return Y;
  const Matrix<Scalar> half = skew_exp(X, t / Scalar(2)).mat();
  Matrix<Scalar> out = half.transpose() * Y * half;
  // restore exact skewness lost to round-off
  return Scalar(0.5) * (out - out.transpose());
}

/// SO(n) with the bi-invariant metric -tr(XY).  Tangent vectors at Theta are
/// represented by X in so(n) (the tangent vector is Theta X).
template <typename Scalar_> class SpecialOrthogonal {
public:
  using Scalar = Scalar_;
  using Point = Rotation<Scalar>;
  using Tangent = Matrix<Scalar>;

  explicit SpecialOrthogonal(Eigen::Index n) : n_(n) {
    if (n_ < 2)
      throw Error(ErrorCode::InvalidArgument, "SO(n) needs n >= 2");
  }

  std::size_t dimension() const {
    return static_cast<std::size_t>(n_ * (n_ - 1) / 2);
  }
  Eigen::Index matrix_size() const { return n_; }

  Scalar inner(const Point &, const Tangent &X, const Tangent &Y) const {
    return skew_inner(X, Y);
  }

  Point exp(const Point &theta, const Tangent &X, Scalar t) const {
    return so_geodesic(theta, X, t);
  }

  Tangent transport(const Point &, const Tangent &X, Scalar t,
                    const Tangent &Y) const {
    return so_transport(Y, X, t);
  }

private:
  Eigen::Index n_;
};

/// Linear conjugate gradient on so(n) for a self-adjoint positive definite
/// operator A (in the metric -tr(XY)).  Throws IndefiniteOperator if a search
/// direction d with <d, A d> <= 0 is met.
template <typename Scalar>
Matrix<Scalar>
solve_skew_cg(const std::function<Matrix<Scalar>(const Matrix<Scalar> &)> &A,
              const Matrix<Scalar> &rhs, Scalar relative_tolerance,
              std::size_t max_iterations) {
  Matrix<Scalar> X = Matrix<Scalar>::Zero(rhs.rows(), rhs.cols());
  const Scalar rhs_norm = rhs.norm();
  if (rhs_norm == Scalar(0))
    return X;
  Matrix<Scalar> r = rhs;
  Matrix<Scalar> d = r;
  Scalar rr = skew_inner(r, r);
  for (std::size_t k = 0; k < max_iterations; ++k) {
    if (std::sqrt(rr) <= relative_tolerance * rhs_norm)
      break;
    const Matrix<Scalar> Ad = A(d);
    const Scalar curvature = skew_inner(d, Ad);
    if (!(curvature > Scalar(0)))
      throw Error(ErrorCode::IndefiniteOperator,
                  "operator is not positive definite along a CG direction");
    const Scalar alpha = rr / curvature;
    X += alpha * d;
    r -= alpha * Ad;
    const Scalar rr_next = skew_inner(r, r);
    d = r + (rr_next / rr) * d;
    rr = rr_next;
  }
  return X;
}

} // namespace riemann
