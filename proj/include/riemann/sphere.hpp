#pragma once

#include "riemann/core.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace riemann {

/// Tolerances used to validate sphere inputs.
template <typename Scalar> struct SphereTolerance {
  static constexpr Scalar unit_norm = Scalar(1e-12);
  static constexpr Scalar tangency = Scalar(1e-12);
  static constexpr Scalar singular_condition = Scalar(1e14);
  static constexpr Scalar degenerate_pivot = Scalar(1e-14);
};

/// A unit vector in R^n, i.e. a point of S^{n-1}.
template <typename Scalar> class SpherePoint {
public:
  explicit SpherePoint(Vector<Scalar> x) : x_(std::move(x)) {
    if (x_.size() < 1 ||
        std::abs(x_.squaredNorm() - Scalar(1)) > SphereTolerance<Scalar>::unit_norm)
      throw Error(ErrorCode::InvalidArgument, "sphere point must have unit norm");
  }

  /// Projects a nonzero vector onto the sphere.
  static SpherePoint normalized(const Vector<Scalar> &v) {
    const Scalar norm = v.norm();
    if (!(norm > Scalar(0)))
      throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
    return SpherePoint(v / norm);
  }

  const Vector<Scalar> &vec() const { return x_; }
  Eigen::Index size() const { return x_.size(); }

  bool operator==(const SpherePoint &other) const { return x_ == other.x_; }

private:
  Vector<Scalar> x_;
};

/// Removes the normal component of v at x.
template <typename Scalar>
Vector<Scalar> project_tangent(const SpherePoint<Scalar> &x,
                               const VectorArg<Scalar> &v) {
  return v - x.vec().dot(v) * x.vec();
}

template <typename Scalar>
bool is_tangent(const SpherePoint<Scalar> &x, const VectorArg<Scalar> &v) {
  return std::abs(x.vec().dot(v)) <= SphereTolerance<Scalar>::tangency * v.norm();
}

/// Point at time t on the great circle leaving x with velocity h.  The arc
/// length travelled is |h| t, so sphere_exp(x, h, 1) is exp_x(h).
template <typename Scalar>
SpherePoint<Scalar> sphere_exp(const SpherePoint<Scalar> &x,
                               const VectorArg<Scalar> &h, ScalarArg<Scalar> t) {
  if (t == Scalar(0))
    return x;
  const Scalar speed = h.norm();
  if (!(speed > Scalar(0)))
    throw Error(ErrorCode::ZeroTangent, "geodesic direction is zero");
  const Scalar arc = speed * t;
  Vector<Scalar> y = std::cos(arc) * x.vec() + (std::sin(arc) / speed) * h;
  y /= y.norm();
  return SpherePoint<Scalar>(std::move(y));
}

/// Parallel translation of v along t -> x cos t + h sin t, with |h| = 1:
///   tau v = v - (h^T v)(x sin t + h (1 - cos t)).
template <typename Scalar>
Vector<Scalar> sphere_transport(const SpherePoint<Scalar> &x,
                                const VectorArg<Scalar> &h, ScalarArg<Scalar> t,
                                const VectorArg<Scalar> &v) {
  if (std::abs(h.norm() - Scalar(1)) > SphereTolerance<Scalar>::unit_norm)
    throw Error(ErrorCode::NotUnitDirection, "transport direction must be unit");
  if (!is_tangent(x, h))
    throw Error(ErrorCode::NotTangent, "transport direction is not tangent");
  if (!is_tangent(x, v))
    throw Error(ErrorCode::NotTangent, "transported vector is not tangent");
  const Scalar hv = h.dot(v);
  return v - hv * (std::sin(t) * x.vec() + (Scalar(1) - std::cos(t)) * h);
}

/// Angle between two sphere points, computed without the arccos round-off
/// near zero.
template <typename Scalar>
Scalar sphere_distance(const SpherePoint<Scalar> &x,
                       const SpherePoint<Scalar> &y) {
  const Scalar c = x.vec().dot(y.vec());
  const Scalar s = (y.vec() - c * x.vec()).norm();
  return std::atan2(s, c);
}

/// Angle between the lines spanned by x and y (sign-agnostic, in [0, pi/2]).
template <typename Scalar>
Scalar axis_angle(const Vector<Scalar> &x, const Vector<Scalar> &y) {
  const Scalar c = x.dot(y);
  const Scalar s = (y - c * x).norm();
  return std::atan2(s, std::abs(c));
}

/// Inverse of the exponential map: the tangent at x whose geodesic reaches y
/// at t = 1.  Its norm is the great-circle distance.
template <typename Scalar>
Vector<Scalar> sphere_log(const SpherePoint<Scalar> &x,
                          const SpherePoint<Scalar> &y) {
  if ((x.vec() + y.vec()).norm() <= SphereTolerance<Scalar>::unit_norm)
    throw Error(ErrorCode::AntipodalPoints, "log undefined at antipodal points");
  const Scalar c = x.vec().dot(y.vec());
  Vector<Scalar> w = y.vec() - c * x.vec();
  const Scalar s = w.norm();
  if (s == Scalar(0))
    return Vector<Scalar>::Zero(x.size());
  return (std::atan2(s, c) / s) * w;
}

/// rho(x) = x^T Q x on the unit sphere, for symmetric Q.
template <typename Scalar> class RayleighProblem {
public:
  explicit RayleighProblem(Matrix<Scalar> Q) : Q_(std::move(Q)) {
    if (Q_.rows() != Q_.cols() || Q_.rows() < 1)
      throw Error(ErrorCode::InvalidArgument, "Q must be square");
    if (Q_ != Q_.transpose())
      throw Error(ErrorCode::InvalidArgument, "Q must be exactly symmetric");
  }

  const Matrix<Scalar> &Q() const { return Q_; }
  Eigen::Index size() const { return Q_.rows(); }

private:
  Matrix<Scalar> Q_;
};

template <typename Scalar>
Scalar rayleigh_value(const RayleighProblem<Scalar> &prob,
                      const SpherePoint<Scalar> &x) {
  return x.vec().dot(prob.Q() * x.vec());
}

/// grad rho = 2 (Qx - rho(x) x); tangent at x.
template <typename Scalar>
Vector<Scalar> rayleigh_gradient(const RayleighProblem<Scalar> &prob,
                                 const SpherePoint<Scalar> &x) {
  const Vector<Scalar> Qx = prob.Q() * x.vec();
  const Scalar rho = x.vec().dot(Qx);
  return Scalar(2) * (Qx - rho * x.vec());
}

/// Second covariant differential of rho as a tangent operator,
/// u -> 2 (I - x x^T)(Q - rho(x) I) u.
template <typename Scalar>
Vector<Scalar> rayleigh_hessian_apply(const RayleighProblem<Scalar> &prob,
                                      const SpherePoint<Scalar> &x,
                                      const VectorArg<Scalar> &u) {
  if (!is_tangent(x, u))
    throw Error(ErrorCode::NotTangent, "Hessian argument is not tangent");
  const Scalar rho = rayleigh_value(prob, x);
  const Vector<Scalar> Au = prob.Q() * u - rho * u;
  return Scalar(2) * project_tangent(x, Au);
}

/// The bilinear form (grad^2 rho)_x(u, w) = 2 u^T (Q - rho I) w.
template <typename Scalar>
Scalar rayleigh_hessian_form(const RayleighProblem<Scalar> &prob,
                             const SpherePoint<Scalar> &x,
                             const VectorArg<Scalar> &u, const VectorArg<Scalar> &w) {
  const Scalar rho = rayleigh_value(prob, x);
  // both orders summed so the form is symmetric bit for bit
  const Scalar uQw = Scalar(0.5) * (u.dot(prob.Q() * w) + w.dot(prob.Q() * u));
  return Scalar(2) * (uQw - rho * u.dot(w));
}

namespace detail {

/// True when the condition estimate of the factored matrix exceeds the
/// singular threshold.  Eigen's estimator breaks down on exactly zero pivots,
/// so the pivot ratio of U is checked as well.
template <typename Scalar>
bool numerically_singular(const Eigen::PartialPivLU<Matrix<Scalar>> &lu) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const Scalar limit = SphereTolerance<Scalar>::singular_condition;
  if (!(pivots.minCoeff() * limit > pivots.maxCoeff()))
    return true;
  return !(lu.rcond() * limit >= Scalar(1));
}

template <typename Scalar>
Eigen::PartialPivLU<Matrix<Scalar>> factor_checked(const Matrix<Scalar> &A,
                                                   ErrorCode on_singular) {
  Eigen::PartialPivLU<Matrix<Scalar>> lu(A);
  if (numerically_singular(lu))
    throw Error(on_singular, "matrix is numerically singular");
  return lu;
}

} // namespace detail

/// Solves (I - x x^T) A u = v for u tangent at x, where v is tangent at x:
///   u = A^{-1} (v - (x^T A^{-1} v / x^T A^{-1} x) x).
template <typename Scalar>
Vector<Scalar> solve_projected_linear(const MatrixArg<Scalar> &A,
                                      const SpherePoint<Scalar> &x,
                                      const VectorArg<Scalar> &v) {
  if (A.rows() != A.cols() || A.rows() != x.size() || v.size() != x.size())
    throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  if (!is_tangent(x, v))
    throw Error(ErrorCode::NotTangent, "right-hand side is not tangent");
  const auto lu = detail::factor_checked(A, ErrorCode::SingularMatrix);
  const Vector<Scalar> Ainv_x = lu.solve(x.vec());
  const Vector<Scalar> Ainv_v = lu.solve(v);
  const Scalar pivot = x.vec().dot(Ainv_x);
  // |A^{-1}|_1 estimated from the reciprocal condition number
  const Scalar inv_norm =
      Scalar(1) / (lu.rcond() * A.cwiseAbs().colwise().sum().maxCoeff());
  if (std::abs(pivot) < SphereTolerance<Scalar>::degenerate_pivot * inv_norm)
    throw Error(ErrorCode::DegeneratePivot, "x^T A^{-1} x vanishes");
  return Ainv_v - (x.vec().dot(Ainv_v) / pivot) * Ainv_x;
}

/// Newton direction for rho at x:
///   H = -x + alpha (Q - rho I)^{-1} x,  alpha = 1 / x^T (Q - rho I)^{-1} x.
/// Throws SingularShift when rho(x) is an eigenvalue to working precision.
template <typename Scalar>
Vector<Scalar> rayleigh_newton_step(const RayleighProblem<Scalar> &prob,
                                    const SpherePoint<Scalar> &x) {
  const Scalar rho = rayleigh_value(prob, x);
  Matrix<Scalar> shifted = prob.Q();
  shifted.diagonal().array() -= rho;
  const auto lu = detail::factor_checked(shifted, ErrorCode::SingularShift);
  const Vector<Scalar> y = lu.solve(x.vec());
  const Scalar xy = x.vec().dot(y);
  if (!(std::abs(xy) > Scalar(0)) || !std::isfinite(xy))
    throw Error(ErrorCode::DegeneratePivot, "x^T (Q - rho I)^{-1} x vanishes");
  return project_tangent(x, Vector<Scalar>(y / xy - x.vec()));
}

/// Closed-form maximizer of rho along the great circle x c + h s.
template <typename Scalar> struct LineMaximum {
  Scalar c = 1;
  Scalar s = 0;
  Scalar v = 0; // 1 - c, computed as s^2 / (1 + c)
  bool degenerate = false;

  /// The geodesic time of the maximizer.
  Scalar angle() const { return std::atan2(s, c); }
};

/// With a = 2 x^T Q h, b = x^T Q x - h^T Q h and r = sqrt(a^2 + b^2),
/// rho(x cos t + h sin t) = const + (b cos 2t + a sin 2t) / 2 is maximized at
/// (cos 2t, sin 2t) = (b, a) / r.  When r vanishes rho is constant on the
/// circle and the result stays put (degenerate = true).
template <typename Scalar>
LineMaximum<Scalar> rayleigh_line_max(const RayleighProblem<Scalar> &prob,
                                      const SpherePoint<Scalar> &x,
                                      const VectorArg<Scalar> &h) {
  if (std::abs(h.norm() - Scalar(1)) > SphereTolerance<Scalar>::unit_norm)
    throw Error(ErrorCode::NotUnitDirection, "line direction must be unit");
  const Vector<Scalar> Qh = prob.Q() * h;
  const Scalar xQx = rayleigh_value(prob, x);
  const Scalar hQh = h.dot(Qh);
  const Scalar a = Scalar(2) * x.vec().dot(Qh);
  const Scalar b = xQx - hQh;
  const Scalar r = std::hypot(a, b);

  LineMaximum<Scalar> out;
  const Scalar scale = std::abs(xQx) + std::abs(hQh);
  if (!(r > std::numeric_limits<Scalar>::epsilon() * scale)) {
    out.degenerate = true;
    return out;
  }
  if (b >= Scalar(0)) {
    out.c = std::sqrt(Scalar(0.5) * (Scalar(1) + b / r));
    out.s = a / (Scalar(2) * r * out.c);
  } else {
    out.s = std::sqrt(Scalar(0.5) * (Scalar(1) - b / r));
    out.c = a / (Scalar(2) * r * out.s);
  }
  out.v = out.s * out.s / (Scalar(1) + out.c);
  return out;
}

/// S^{n-1} as a Riemannian manifold: tangents are ambient vectors orthogonal
/// to the base point, with the Euclidean inner product.
template <typename Scalar_> class SphereManifold {
public:
  using Scalar = Scalar_;
  using Point = SpherePoint<Scalar>;
  using Tangent = Vector<Scalar>;

  explicit SphereManifold(Eigen::Index ambient_dimension)
      : n_(ambient_dimension) {
    if (n_ < 2)
      throw Error(ErrorCode::InvalidArgument, "sphere needs ambient dimension >= 2");
  }

  std::size_t dimension() const { return static_cast<std::size_t>(n_ - 1); }
  Eigen::Index ambient_dimension() const { return n_; }

  Scalar inner(const Point &, const Tangent &u, const Tangent &w) const {
    return u.dot(w);
  }

  Point exp(const Point &x, const Tangent &v, Scalar t) const {
    if (t == Scalar(0) || v.norm() == Scalar(0))
      return x;
    return sphere_exp(x, v, t);
  }

  /// Transport of w along s -> exp(x, v, s) up to s = t.
  Tangent transport(const Point &x, const Tangent &v, Scalar t,
                    const Tangent &w) const {
    const Scalar speed = v.norm();
    if (t == Scalar(0) || speed == Scalar(0))
      return w;
    const Tangent h = project_tangent(x, Tangent(v / speed));
    return sphere_transport(x, Tangent(h / h.norm()), speed * t,
                            project_tangent(x, w));
  }

  Tangent project(const Point &x, const Tangent &v) const {
    return project_tangent(x, v);
  }

private:
  Eigen::Index n_;
};

/// Maximization of rho posed as minimization of -rho.  The error metric is the
/// angle between the iterate's line and the reference eigenvector (by default
/// the top eigenvector from a dense eigensolve).
template <typename Scalar> class RayleighMaximization {
public:
  using Manifold = SphereManifold<Scalar>;
  using Point = SpherePoint<Scalar>;
  using Tangent = Vector<Scalar>;

  explicit RayleighMaximization(RayleighProblem<Scalar> prob,
                                std::optional<Vector<Scalar>> reference = {})
      : prob_(std::move(prob)), manifold_(prob_.size()) {
    if (reference) {
      reference_ = *reference / reference->norm();
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(prob_.Q());
      reference_ = eig.eigenvectors().col(prob_.size() - 1);
    }
  }

  const Manifold &manifold() const { return manifold_; }
  const RayleighProblem<Scalar> &problem() const { return prob_; }
  const Vector<Scalar> &reference() const { return reference_; }

  Scalar value(const Point &x) const { return -rayleigh_value(prob_, x); }
  Tangent gradient(const Point &x) const { return -rayleigh_gradient(prob_, x); }
  Scalar error(const Point &x) const { return axis_angle(reference_, x.vec()); }

  Tangent hessian_apply(const Point &x, const Tangent &u) const {
    return -rayleigh_hessian_apply(prob_, x, project_tangent(x, u));
  }

  /// Newton's direction is the same for rho and -rho.
  Tangent newton_direction(const Point &x) const {
    return rayleigh_newton_step(prob_, x);
  }

  /// Minimizer of -rho along s -> exp(x, H, s): the maximizing angle of the
  /// closed form, divided by |H| to convert arc length to the step parameter.
  Scalar exact_step(const Point &x, const Tangent &H) const {
    const Scalar norm = H.norm();
    const Tangent h = project_tangent(x, Tangent(H / norm));
    const auto line = rayleigh_line_max(prob_, x, Tangent(h / h.norm()));
    Scalar angle = line.angle();
    // rho is pi-periodic along the circle; take the first maximizer ahead
    if (angle < Scalar(0))
      angle += Scalar(EIGEN_PI);
    return angle / norm;
  }

  Scalar step_estimate(const Point &x, const Tangent &H) const {
    return exact_step(x, H);
  }

private:
  RayleighProblem<Scalar> prob_;
  Manifold manifold_;
  Vector<Scalar> reference_;
};

} // namespace riemann
