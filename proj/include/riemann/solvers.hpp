#pragma once

#include "riemann/convergence.hpp"
#include "riemann/core.hpp"
#include "riemann/line_search.hpp"
#include "riemann/manifold.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riemann {

enum class SolverStatus {
  Converged,
  MaxIterations,
  LineSearchFailed,
  Stagnated,
  SingularHessian,
  IndefiniteOperator,
  Diverged,
};

constexpr std::string_view to_string(SolverStatus s) {
  switch (s) {
  case SolverStatus::Converged: return "converged";
  case SolverStatus::MaxIterations: return "max-iterations";
  case SolverStatus::LineSearchFailed: return "line-search-failed";
  case SolverStatus::Stagnated: return "stagnated";
  case SolverStatus::SingularHessian: return "singular-hessian";
  case SolverStatus::IndefiniteOperator: return "indefinite-operator";
  case SolverStatus::Diverged: return "diverged";
  }
  return "unknown";
}

template <Objective F> struct SolverResult {
  using Scalar = typename F::Manifold::Scalar;
  using Point = typename F::Manifold::Point;

  explicit SolverResult(Point start) : point(std::move(start)) {}

  Point point;
  IterationTrace<Scalar> trace;
  std::vector<Point> iterates; // iterates[i] is the point of trace[i]
  SolverStatus status = SolverStatus::MaxIterations;
  std::string message;

  bool converged() const { return status == SolverStatus::Converged; }
};

/// Data handed to a conjugate-gradient observer after each step i -> i+1.
template <typename Tangent, typename Scalar> struct CgStep {
  std::size_t index;
  Scalar step;              // lambda_i
  const Tangent &H;         // H_i
  const Tangent &G_next;    // G_{i+1}
  const Tangent &tau_H;     // H_i transported to p_{i+1}
  const Tangent &tau_G;     // G_i transported to p_{i+1}
  const Tangent &H_next;    // H_{i+1}
  bool reset;
};

struct NoObserver {
  template <typename Step> void operator()(const Step &) const {}
};

namespace detail {

template <Objective F>
bool record_and_check(const F &f, SolverResult<F> &result, std::size_t i,
                      typename F::Manifold::Scalar grad_norm,
                      const SolverConfig<typename F::Manifold::Scalar> &config) {
  const auto &p = result.point;
  const auto error = f.error(p);
  result.trace.push({i, f.value(p), grad_norm, error, 0});
  result.iterates.push_back(p);
  if (grad_norm < config.gradient_tolerance ||
      (config.error_tolerance && error <= *config.error_tolerance)) {
    result.status = SolverStatus::Converged;
    return true;
  }
  if (i >= config.max_iterations) {
    result.status = SolverStatus::MaxIterations;
    return true;
  }
  return false;
}

} // namespace detail

/// Steepest descent with geodesic line minimization:
///   G_i = -grad f(p_i),  p_{i+1} = exp_{p_i}(lambda_i G_i).
template <Objective F>
SolverResult<F> steepest_descent(const F &f, const typename F::Manifold::Point &p0,
                                 const SolverConfig<typename F::Manifold::Scalar> &config) {
  using Scalar = typename F::Manifold::Scalar;
  config.validate();
  const auto &M = f.manifold();
  SolverResult<F> result(p0);
  for (std::size_t i = 0;; ++i) {
    const typename F::Manifold::Tangent G = -f.gradient(result.point);
    const Scalar gnorm = std::sqrt(M.inner(result.point, G, G));
    if (detail::record_and_check(f, result, i, gnorm, config))
      return result;
    LineSearchResult<Scalar> ls;
    try {
      ls = line_minimize_geodesic(f, result.point, G, config);
    } catch (const Error &e) {
      result.status = SolverStatus::LineSearchFailed;
      result.message = e.what();
      return result;
    }
    if (!(ls.step > Scalar(0))) {
      result.status = SolverStatus::Stagnated;
      return result;
    }
    result.trace.set_last_step(ls.step);
    result.point = M.exp(result.point, G, ls.step);
  }
}

/// Newton's method with unit steps: H_i = -(Hess f)^{-1} grad f,
/// p_{i+1} = exp_{p_i}(H_i).  A SingularShift from the problem means the
/// iterate is critical to working precision and ends the run as converged.
template <HasNewtonDirection F>
SolverResult<F> newton(const F &f, const typename F::Manifold::Point &p0,
                       const SolverConfig<typename F::Manifold::Scalar> &config) {
  using Scalar = typename F::Manifold::Scalar;
  config.validate();
  const auto &M = f.manifold();
  SolverResult<F> result(p0);
  Scalar previous_norm = std::numeric_limits<Scalar>::infinity();
  std::size_t increases = 0;
  for (std::size_t i = 0;; ++i) {
    const auto g = f.gradient(result.point);
    const Scalar gnorm = std::sqrt(M.inner(result.point, g, g));
    if (detail::record_and_check(f, result, i, gnorm, config))
      return result;
    increases = gnorm > previous_norm ? increases + 1 : 0;
    previous_norm = gnorm;
    if (increases >= config.divergence_window) {
      result.status = SolverStatus::Diverged;
      return result;
    }

    typename F::Manifold::Tangent H;
    Scalar step = Scalar(1);
    try {
      H = f.newton_direction(result.point);
    } catch (const Error &e) {
      if (e.code() == ErrorCode::SingularShift) {
        result.status = SolverStatus::Converged;
        result.message = e.what();
        return result;
      }
      if (config.newton_fallback == NewtonFallback::Abort) {
        result.status = e.code() == ErrorCode::IndefiniteOperator
                            ? SolverStatus::IndefiniteOperator
                            : SolverStatus::SingularHessian;
        result.message = e.what();
        return result;
      }
      H = -g;
      try {
        step = line_minimize_geodesic(f, result.point, H, config).step;
      } catch (const Error &ls) {
        result.status = SolverStatus::LineSearchFailed;
        result.message = ls.what();
        return result;
      }
    }
    result.trace.set_last_step(step);
    result.point = M.exp(result.point, H, step);
  }
}

/// Conjugate gradient with geodesic line minimization and parallel
/// translation:
///   H_{i+1} = G_{i+1} + gamma_i tau H_i,
///   gamma_i = <G_{i+1} - tau G_i, G_{i+1}> / <G_i, H_i>,
/// reset to H_{i+1} = G_{i+1} whenever i = r - 1 (mod r).
template <Objective F, typename Observer = NoObserver>
SolverResult<F>
conjugate_gradient(const F &f, const typename F::Manifold::Point &p0,
                   const SolverConfig<typename F::Manifold::Scalar> &config,
                   Observer &&observe = {}) {
  using Scalar = typename F::Manifold::Scalar;
  using Tangent = typename F::Manifold::Tangent;
  config.validate();
  const auto &M = f.manifold();
  const std::size_t period = config.reset_period.value_or(M.dimension());

  SolverResult<F> result(p0);
  Tangent G = -f.gradient(result.point);
  Tangent H = G;
  for (std::size_t i = 0;; ++i) {
    const Scalar gnorm = std::sqrt(M.inner(result.point, G, G));
    if (detail::record_and_check(f, result, i, gnorm, config))
      return result;

    Scalar gh = M.inner(result.point, G, H);
    if (!(gh > Scalar(0))) {
      // not a descent direction (or zero denominator): restart
      H = G;
      gh = M.inner(result.point, G, G);
    }

    LineSearchResult<Scalar> ls;
    try {
      ls = line_minimize_geodesic(f, result.point, H, config);
    } catch (const Error &e) {
      result.status = SolverStatus::LineSearchFailed;
      result.message = e.what();
      return result;
    }
    if (!(ls.step > Scalar(0))) {
      result.status = SolverStatus::Stagnated;
      return result;
    }
    result.trace.set_last_step(ls.step);

    const auto next = M.exp(result.point, H, ls.step);
    const Tangent G_next = -f.gradient(next);
    const Tangent tau_G = M.transport(result.point, H, ls.step, G);
    const Tangent tau_H = M.transport(result.point, H, ls.step, H);

    const bool reset = (i % period) == period - 1;
    Tangent H_next;
    if (reset) {
      H_next = G_next;
    } else {
      Scalar gamma = config.beta == BetaFormula::PolakRibiere
                         ? M.inner(next, Tangent(G_next - tau_G), G_next) / gh
                         : M.inner(next, G_next, G_next) / gh;
      if (config.clamp_beta && gamma < Scalar(0))
        gamma = Scalar(0);
      H_next = G_next + gamma * tau_H;
    }
    observe(CgStep<Tangent, Scalar>{i, ls.step, H, G_next, tau_H, tau_G, H_next,
                                    reset});

    result.point = next;
    G = G_next;
    H = H_next;
  }
}

} // namespace riemann
