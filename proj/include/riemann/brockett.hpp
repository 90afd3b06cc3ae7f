#pragma once

#include "riemann/core.hpp"
#include "riemann/rotation.hpp"

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

namespace riemann {

/// f(Theta) = tr(Theta^T Q Theta N) on SO(n), with Q symmetric and N diagonal
/// with pairwise distinct entries.  Everything below works with
/// H = Theta^T Q Theta and reports tangent vectors in algebra coordinates
/// under the metric -tr(XY).
template <typename Scalar> class BrockettProblem {
public:
  BrockettProblem(Matrix<Scalar> Q, Vector<Scalar> nu)
      : Q_(std::move(Q)), nu_(std::move(nu)) {
    if (Q_.rows() != Q_.cols() || Q_.rows() < 2)
      throw Error(ErrorCode::InvalidArgument, "Q must be square with n >= 2");
    if (Q_ != Q_.transpose())
      throw Error(ErrorCode::InvalidArgument, "Q must be exactly symmetric");
    if (nu_.size() != Q_.rows())
      throw Error(ErrorCode::InvalidArgument, "N must match the size of Q");
    for (Eigen::Index i = 0; i < nu_.size(); ++i)
      for (Eigen::Index j = i + 1; j < nu_.size(); ++j)
        if (nu_(i) == nu_(j))
          throw Error(ErrorCode::InvalidArgument,
                      "diagonal of N must have distinct entries");
  }

  const Matrix<Scalar> &Q() const { return Q_; }
  const Vector<Scalar> &nu() const { return nu_; }
  Matrix<Scalar> N() const { return nu_.asDiagonal(); }
  Eigen::Index size() const { return Q_.rows(); }

private:
  Matrix<Scalar> Q_;
  Vector<Scalar> nu_;
};

/// H = Ad_{Theta^T}(Q) = Theta^T Q Theta, symmetrized.
template <typename Scalar>
Matrix<Scalar> conjugated(const MatrixArg<Scalar> &Q, const Rotation<Scalar> &theta) {
  Matrix<Scalar> H = theta.mat().transpose() * Q * theta.mat();
  return Scalar(0.5) * (H + H.transpose());
}

template <typename Scalar>
Matrix<Scalar> skew_part(const Matrix<Scalar> &A) {
  return Scalar(0.5) * (A - A.transpose());
}

template <typename Scalar>
Scalar brockett_value(const BrockettProblem<Scalar> &prob,
                      const Rotation<Scalar> &theta) {
  return conjugated(prob.Q(), theta).diagonal().dot(prob.nu());
}

/// Gradient [H, N] in algebra coordinates.
template <typename Scalar>
Matrix<Scalar> brockett_gradient(const BrockettProblem<Scalar> &prob,
                                 const Rotation<Scalar> &theta) {
  return skew_part<Scalar>(bracket(conjugated(prob.Q(), theta), prob.N()));
}

/// Step along t -> Theta e^{t Omega} on which f is guaranteed nondecreasing:
///   t <= 2 tr(H Omega N) / (|[Omega, H]| |[Omega, N]|).
/// phi'(0) = 2 tr(H Omega N) and |phi''| is bounded by the denominator.
template <typename Scalar>
Scalar brockett_step_estimate(const BrockettProblem<Scalar> &prob,
                              const Rotation<Scalar> &theta,
                              const MatrixArg<Scalar> &omega) {
  const Matrix<Scalar> H = conjugated(prob.Q(), theta);
  const Matrix<Scalar> N = prob.N();
  const Scalar slope = Scalar(2) * (H * omega * N).trace();
  if (!(slope > Scalar(0)))
    throw Error(ErrorCode::NotAscentDirection,
                "tr(H Omega N) must be positive for the step estimate");
  const Scalar denom = bracket(omega, H).norm() * bracket(omega, N).norm();
  if (!(denom > Scalar(0)))
    throw Error(ErrorCode::DegenerateCommutator,
                "[Omega, H] or [Omega, N] vanishes");
  return slope / denom;
}

/// L_Theta(X) = [H, [X, N]] - [[X, H], N].  The second covariant differential
/// is (grad^2 f)(Theta X, Theta Y) = -tr(L_Theta(X) Y) / 2, i.e. the Hessian
/// operator in the metric -tr(XY) is L_Theta / 2.  L_Theta is self-adjoint
/// and negative definite near the maximum.
template <typename Scalar>
Matrix<Scalar> brockett_hessian_apply(const BrockettProblem<Scalar> &prob,
                                      const Rotation<Scalar> &theta,
                                      const MatrixArg<Scalar> &X) {
  const Matrix<Scalar> H = conjugated(prob.Q(), theta);
  const Matrix<Scalar> N = prob.N();
  Matrix<Scalar> L = bracket(H, bracket(X, N)) - bracket(bracket(X, H), N);
  return skew_part(L);
}

template <typename Scalar>
Scalar brockett_hessian_form(const BrockettProblem<Scalar> &prob,
                             const Rotation<Scalar> &theta,
                             const MatrixArg<Scalar> &X, const MatrixArg<Scalar> &Y) {
  return Scalar(-0.5) * (brockett_hessian_apply(prob, theta, X) * Y).trace();
}

/// Newton direction X for maximizing f, from L_Theta(X) = -2 [H, N] solved by
/// conjugate gradient against the positive definite -L_Theta.  The unit step
/// Theta e^{X} is the Newton update.
template <typename Scalar>
Matrix<Scalar> brockett_newton_direction(const BrockettProblem<Scalar> &prob,
                                         const Rotation<Scalar> &theta,
                                         ScalarArg<Scalar> relative_tolerance = Scalar(1e-12)) {
  const Matrix<Scalar> H = conjugated(prob.Q(), theta);
  const Matrix<Scalar> N = prob.N();
  const Matrix<Scalar> rhs = Scalar(2) * skew_part<Scalar>(bracket(H, N));
  std::function<Matrix<Scalar>(const Matrix<Scalar> &)> negL =
      [&](const Matrix<Scalar> &X) {
        return Matrix<Scalar>(
            -skew_part<Scalar>(bracket(H, bracket(X, N)) - bracket(bracket(X, H), N)));
      };
  const auto n = prob.size();
  return solve_skew_cg(negL, rhs, relative_tolerance,
                       static_cast<std::size_t>(n * (n - 1) / 2));
}

/// Component (grad^3 f)(Theta E_ij, Theta X, Theta X) at a point where H is
/// diagonal, H = diag(h), N = diag(nu), X = sum_{i<j} x^{ij} E_ij:
///   -2 sum_{k != i,j} x^{ik} x^{jk} ((h_i nu_j - h_j nu_i)
///                                  + (h_j nu_k - h_k nu_j)
///                                  + (h_k nu_i - h_i nu_k)).
/// x^{ik} is read as X(i, k), so x^{ki} = -x^{ik} automatically.
template <typename Scalar>
Scalar brockett_third_component(const Vector<Scalar> &h, const Vector<Scalar> &nu,
                                const Matrix<Scalar> &X, Eigen::Index i,
                                Eigen::Index j) {
  const Eigen::Index n = h.size();
  if (nu.size() != n || X.rows() != n || X.cols() != n || i == j || i < 0 ||
      j < 0 || i >= n || j >= n)
    throw Error(ErrorCode::InvalidArgument, "bad third-component arguments");
  Scalar sum(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == i || k == j)
      continue;
    const Scalar cyclic = (h(i) * nu(j) - h(j) * nu(i)) +
                          (h(j) * nu(k) - h(k) * nu(j)) +
                          (h(k) * nu(i) - h(i) * nu(k));
    sum += X(i, k) * X(j, k) * cyclic;
  }
  return Scalar(-2) * sum;
}

/// Eigenvalues of H placed on the diagonal in the same order as the entries
/// of nu (largest eigenvalue where nu is largest, and so on).
template <typename Scalar>
Matrix<Scalar> ordered_eigenvalue_matrix(const Matrix<Scalar> &H,
                                         const Vector<Scalar> &nu) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(H, Eigen::EigenvaluesOnly);
  const Vector<Scalar> &lambda = eig.eigenvalues(); // ascending
  std::vector<Eigen::Index> order(static_cast<std::size_t>(nu.size()));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return nu(a) < nu(b); });
  Matrix<Scalar> D = Matrix<Scalar>::Zero(H.rows(), H.cols());
  for (std::size_t k = 0; k < order.size(); ++k)
    D(order[k], order[k]) = lambda(static_cast<Eigen::Index>(k));
  return D;
}

/// Maximization of tr(Theta^T Q Theta N) posed as minimization of its
/// negative.  Error metric |H - D|_F with D the eigenvalues of H ordered to
/// match N.
template <typename Scalar> class BrockettMaximization {
public:
  using Manifold = SpecialOrthogonal<Scalar>;
  using Point = Rotation<Scalar>;
  using Tangent = Matrix<Scalar>;

  explicit BrockettMaximization(BrockettProblem<Scalar> prob)
      : prob_(std::move(prob)), manifold_(prob_.size()) {}

  const Manifold &manifold() const { return manifold_; }
  const BrockettProblem<Scalar> &problem() const { return prob_; }

  Scalar value(const Point &theta) const { return -brockett_value(prob_, theta); }
  Tangent gradient(const Point &theta) const {
    return -brockett_gradient(prob_, theta);
  }
  Scalar error(const Point &theta) const {
    const Matrix<Scalar> H = conjugated(prob_.Q(), theta);
    return (H - ordered_eigenvalue_matrix(H, prob_.nu())).norm();
  }

  Tangent hessian_apply(const Point &theta, const Tangent &X) const {
    return Scalar(-0.5) * brockett_hessian_apply(prob_, theta, X);
  }

  Tangent newton_direction(const Point &theta) const {
    return brockett_newton_direction(prob_, theta);
  }

  /// A descent direction for -f is an ascent direction for f, so the
  /// monotone-ascent estimate applies unchanged.
  Scalar step_estimate(const Point &theta, const Tangent &direction) const {
    return brockett_step_estimate(prob_, theta, direction);
  }

  Scalar exact_step(const Point &theta, const Tangent &direction) const {
    return step_estimate(theta, direction);
  }

private:
  BrockettProblem<Scalar> prob_;
  Manifold manifold_;
};

} // namespace riemann
