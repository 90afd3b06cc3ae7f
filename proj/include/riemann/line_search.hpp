#pragma once

#include "riemann/core.hpp"
#include "riemann/manifold.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

namespace riemann {

enum class LineSearchKind {
  Exact,    // problem's closed form (falls back to golden section)
  Golden,   // bracketing + golden-section refinement
  Estimate, // problem's safe step estimate, used as is
};

enum class BetaFormula {
  PolakRibiere,   // <G_{i+1} - tau G_i, G_{i+1}> / <G_i, H_i>
  FletcherReeves, // <G_{i+1}, G_{i+1}> / <G_i, H_i>
};

enum class NewtonFallback {
  Abort,        // stop the run with the error status
  GradientStep, // take a line-searched steepest-descent step instead
};

template <typename Scalar> struct SolverConfig {
  Scalar gradient_tolerance = Scalar(1e-12);
  std::size_t max_iterations = 1000;
  // optional extra stopping rule on the problem's error metric
  std::optional<Scalar> error_tolerance;

  LineSearchKind line_search = LineSearchKind::Exact;
  Scalar golden_growth = Scalar(2);
  Scalar golden_tolerance = Scalar(1e-10);
  std::size_t max_line_evaluations = 200;

  // conjugate gradient; reset period defaults to the manifold dimension
  std::optional<std::size_t> reset_period;
  BetaFormula beta = BetaFormula::PolakRibiere;
  bool clamp_beta = false;

  NewtonFallback newton_fallback = NewtonFallback::Abort;
  std::size_t divergence_window = 5;

  void validate() const {
    if (!(gradient_tolerance > 0) || !(golden_tolerance > 0) ||
        !(golden_growth > 1) || (error_tolerance && !(*error_tolerance > 0)))
      throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (reset_period && *reset_period < 1)
      throw Error(ErrorCode::InvalidArgument, "reset period must be >= 1");
  }
};

template <typename Scalar> struct LineSearchResult {
  Scalar step = 0;
  std::size_t evaluations = 0;
  Scalar value = 0;
};

/// Golden-section minimization of phi on [0, inf) starting from a trial step.
/// Brackets by growing (or shrinking) the trial step geometrically until
/// phi(a) > phi(b) < phi(c), then refines the bracket to relative width
/// `tolerance`.  Requires phi to decrease initially.
template <typename Scalar, typename Phi>
LineSearchResult<Scalar> golden_section_minimize(Phi &&phi, Scalar phi0,
                                                 Scalar initial_step,
                                                 Scalar growth, Scalar tolerance,
                                                 std::size_t max_evaluations) {
  std::size_t evals = 0;
  auto eval = [&](Scalar t) {
    if (++evals > max_evaluations)
      throw Error(ErrorCode::MaxEvaluations, "line search evaluation budget exhausted");
    return phi(t);
  };

  Scalar a = 0, fa = phi0;
  Scalar b = initial_step, fb = eval(b);
  Scalar c, fc;
  if (!(fb < fa)) {
    // shrink until we see a decrease; give up once the trial step has fallen
    // below round-off relative to the initial one
    const Scalar smallest = initial_step * std::numeric_limits<Scalar>::epsilon();
    do {
      c = b;
      fc = fb;
      b = b / growth;
      if (b < smallest)
        throw Error(ErrorCode::NoDecrease, "no decrease along the direction");
      fb = eval(b);
    } while (!(fb < fa));
  } else {
    c = b * growth;
    fc = eval(c);
    while (fc < fb) {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c = c * growth;
      fc = eval(c);
    }
  }

  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar lo = a, hi = c;
  Scalar x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  Scalar f1 = eval(x1), f2 = eval(x2);
  Scalar best = b, fbest = fb;
  if (f1 < fbest) {
    best = x1;
    fbest = f1;
  }
  if (f2 < fbest) {
    best = x2;
    fbest = f2;
  }
  while (hi - lo > tolerance * std::abs(best)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    }
    if (f1 < fbest) {
      best = x1;
      fbest = f1;
    }
    if (f2 < fbest) {
      best = x2;
      fbest = f2;
    }
  }
  return {best, evals, fbest};
}

/// Minimizes t -> f(exp_p(t H)) over t >= 0.
template <Objective F>
LineSearchResult<typename F::Manifold::Scalar>
line_minimize_geodesic(const F &f, const typename F::Manifold::Point &p,
                       const typename F::Manifold::Tangent &H,
                       const SolverConfig<typename F::Manifold::Scalar> &config) {
  using Scalar = typename F::Manifold::Scalar;
  const auto &M = f.manifold();
  const Scalar norm = std::sqrt(M.inner(p, H, H));
  if (!(norm > Scalar(0)))
    throw Error(ErrorCode::InvalidArgument, "line search direction is zero");
  const Scalar slope = M.inner(p, f.gradient(p), H);
  if (!(slope < Scalar(0)))
    throw Error(ErrorCode::NoDecrease, "direction is not a descent direction");

  auto phi = [&](Scalar t) { return f.value(M.exp(p, H, t)); };

  if (config.line_search == LineSearchKind::Exact) {
    if constexpr (HasExactLineStep<F>) {
      const Scalar step = f.exact_step(p, H);
      return {step, 1, phi(step)};
    }
  }
  if (config.line_search == LineSearchKind::Estimate) {
    if constexpr (HasStepEstimate<F>) {
      const Scalar step = f.step_estimate(p, H);
      return {step, 1, phi(step)};
    }
  }

  Scalar initial = Scalar(1) / norm;
  if constexpr (HasStepEstimate<F>) {
    try {
      initial = f.step_estimate(p, H);
    } catch (const Error &) {
    }
  }
  return golden_section_minimize<Scalar>(phi, f.value(p), initial,
                                         config.golden_growth,
                                         config.golden_tolerance,
                                         config.max_line_evaluations);
}

} // namespace riemann
