#pragma once

#include "riemann/brockett.hpp"
#include "riemann/core.hpp"
#include "riemann/rotation.hpp"

#include <utility>

namespace riemann {

/// f(Theta) = tr(H pi(H)), H = Theta^T Q Theta, pi the diagonal projection.
/// Since |H|_F is constant on the orbit, maximizing f minimizes the
/// off-diagonal mass of H.
template <typename Scalar> class JacobiProblem {
public:
  explicit JacobiProblem(Matrix<Scalar> Q) : Q_(std::move(Q)) {
    if (Q_.rows() != Q_.cols() || Q_.rows() < 2)
      throw Error(ErrorCode::InvalidArgument, "Q must be square with n >= 2");
    if (Q_ != Q_.transpose())
      throw Error(ErrorCode::InvalidArgument, "Q must be exactly symmetric");
  }

  const Matrix<Scalar> &Q() const { return Q_; }
  Eigen::Index size() const { return Q_.rows(); }

private:
  Matrix<Scalar> Q_;
};

template <typename Scalar>
Scalar jacobi_value(const JacobiProblem<Scalar> &prob,
                    const Rotation<Scalar> &theta) {
  return conjugated(prob.Q(), theta).diagonal().squaredNorm();
}

/// 2 [H, pi(H)] in algebra coordinates.
template <typename Scalar>
Matrix<Scalar> jacobi_gradient(const JacobiProblem<Scalar> &prob,
                               const Rotation<Scalar> &theta) {
  const Matrix<Scalar> H = conjugated(prob.Q(), theta);
  return Scalar(2) * skew_part<Scalar>(bracket(H, diagonal_part(H)));
}

namespace detail {

template <typename Scalar>
Matrix<Scalar> jacobi_operator(const Matrix<Scalar> &H, const Matrix<Scalar> &X) {
  const Matrix<Scalar> P = diagonal_part(H);
  const Matrix<Scalar> XH = bracket(X, H);
  Matrix<Scalar> L = bracket(H, bracket(X, P)) - bracket(XH, P) -
                     Scalar(2) * bracket(H, diagonal_part(XH));
  return skew_part(L);
}

} // namespace detail

/// Hessian operator of f in the metric -tr(XY):
///   X -> [H, [X, pi(H)]] - [[X, H], pi(H)] - 2 [H, pi([X, H])],
/// so that (grad^2 f)(X, Y) = -tr(op(X) Y).
template <typename Scalar>
Matrix<Scalar> jacobi_hessian_apply(const JacobiProblem<Scalar> &prob,
                                    const Rotation<Scalar> &theta,
                                    const MatrixArg<Scalar> &X) {
  return detail::jacobi_operator(conjugated(prob.Q(), theta), X);
}

/// Newton direction for maximizing f: op(X) = -2 [H, pi(H)], solved by
/// conjugate gradient against the positive definite -op near a maximizer.
template <typename Scalar>
Matrix<Scalar> jacobi_newton_direction(const JacobiProblem<Scalar> &prob,
                                       const Rotation<Scalar> &theta,
                                       ScalarArg<Scalar> relative_tolerance = Scalar(1e-12)) {
  const Matrix<Scalar> H = conjugated(prob.Q(), theta);
  const Matrix<Scalar> rhs =
      Scalar(2) * skew_part<Scalar>(bracket(H, diagonal_part(H)));
  std::function<Matrix<Scalar>(const Matrix<Scalar> &)> neg_op =
      [&](const Matrix<Scalar> &X) {
        return Matrix<Scalar>(-detail::jacobi_operator(H, X));
      };
  const auto n = prob.size();
  return solve_skew_cg(neg_op, rhs, relative_tolerance,
                       static_cast<std::size_t>(n * (n - 1) / 2));
}

/// Maximization of tr(H pi(H)) as minimization of its negative; error metric
/// is the off-diagonal Frobenius mass of H.
template <typename Scalar> class JacobiMaximization {
public:
  using Manifold = SpecialOrthogonal<Scalar>;
  using Point = Rotation<Scalar>;
  using Tangent = Matrix<Scalar>;

  explicit JacobiMaximization(JacobiProblem<Scalar> prob)
      : prob_(std::move(prob)), manifold_(prob_.size()) {}

  const Manifold &manifold() const { return manifold_; }
  const JacobiProblem<Scalar> &problem() const { return prob_; }

  Scalar value(const Point &theta) const { return -jacobi_value(prob_, theta); }
  Tangent gradient(const Point &theta) const {
    return -jacobi_gradient(prob_, theta);
  }
  Scalar error(const Point &theta) const {
    return off_diagonal_norm(conjugated(prob_.Q(), theta));
  }
  Tangent hessian_apply(const Point &theta, const Tangent &X) const {
    return -jacobi_hessian_apply(prob_, theta, X);
  }
  Tangent newton_direction(const Point &theta) const {
    return jacobi_newton_direction(prob_, theta);
  }

private:
  JacobiProblem<Scalar> prob_;
  Manifold manifold_;
};

} // namespace riemann
