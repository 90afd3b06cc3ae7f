#pragma once

#include <concepts>
#include <cstddef>

namespace riemann {

/// A complete Riemannian manifold with closed-form geodesics.
///
///   exp(p, v, t)          point reached at time t along the geodesic leaving p
///                         with velocity v (so exp(p, v, 0) == p)
///   transport(p, v, t, w) parallel translation of w in T_p along that same
///                         geodesic, to the tangent space at exp(p, v, t)
///   inner(p, u, w)        the metric on T_p
///
/// Transport is only required along geodesics; it must be an isometry.
template <typename M>
concept Manifold = requires(const M &m, const typename M::Point &p,
                            const typename M::Tangent &v,
                            typename M::Scalar t) {
  typename M::Scalar;
  typename M::Point;
  typename M::Tangent;
  { m.dimension() } -> std::convertible_to<std::size_t>;
  { m.inner(p, v, v) } -> std::convertible_to<typename M::Scalar>;
  { m.exp(p, v, t) } -> std::same_as<typename M::Point>;
  { m.transport(p, v, t, v) } -> std::same_as<typename M::Tangent>;
};

/// An objective to be minimized over a manifold.  `error` is a
/// problem-specific, nonnegative distance-to-optimum proxy used for traces.
template <typename F>
concept Objective =
    Manifold<typename F::Manifold> &&
    requires(const F &f, const typename F::Manifold::Point &p) {
      { f.manifold() } -> std::convertible_to<const typename F::Manifold &>;
      { f.value(p) } -> std::convertible_to<typename F::Manifold::Scalar>;
      { f.gradient(p) } -> std::same_as<typename F::Manifold::Tangent>;
      { f.error(p) } -> std::convertible_to<typename F::Manifold::Scalar>;
    };

/// Objective with the second covariant differential as a tangent operator.
template <typename F>
concept HasHessian =
    Objective<F> && requires(const F &f, const typename F::Manifold::Point &p,
                             const typename F::Manifold::Tangent &u) {
      { f.hessian_apply(p, u) } -> std::same_as<typename F::Manifold::Tangent>;
    };

/// Objective that can produce the Newton direction -(Hess f)^{-1} grad f.
template <typename F>
concept HasNewtonDirection =
    Objective<F> && requires(const F &f, const typename F::Manifold::Point &p) {
      { f.newton_direction(p) } -> std::same_as<typename F::Manifold::Tangent>;
    };

/// Objective with a closed-form exact minimizer along geodesics.
template <typename F>
concept HasExactLineStep =
    Objective<F> && requires(const F &f, const typename F::Manifold::Point &p,
                             const typename F::Manifold::Tangent &u) {
      { f.exact_step(p, u) } -> std::convertible_to<typename F::Manifold::Scalar>;
    };

/// Objective with a cheap safe step-size estimate along a descent direction.
template <typename F>
concept HasStepEstimate =
    Objective<F> && requires(const F &f, const typename F::Manifold::Point &p,
                             const typename F::Manifold::Tangent &u) {
      { f.step_estimate(p, u) } -> std::convertible_to<typename F::Manifold::Scalar>;
    };

} // namespace riemann
