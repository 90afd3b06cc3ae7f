#pragma once

#include "riemann/convergence.hpp"
#include "riemann/core.hpp"
#include "riemann/sphere.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riemann {

enum class EigenTermination {
  Residual,      // |Qx - rho x| below tolerance
  SingularShift, // Q - rho I singular to working precision
  ZeroGradient,  // started at an eigenvector (CG)
  Stagnated,     // no progress along the search circle
  MaxIterations,
};

constexpr std::string_view to_string(EigenTermination t) {
  switch (t) {
  case EigenTermination::Residual: return "residual";
  case EigenTermination::SingularShift: return "singular-shift";
  case EigenTermination::ZeroGradient: return "zero-gradient";
  case EigenTermination::Stagnated: return "stagnated";
  case EigenTermination::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

template <typename Scalar> struct EigenConfig {
  // stop when |Qx - rho x| <= residual_tolerance * |Q|_F
  Scalar residual_tolerance = Scalar(1e-13);
  std::size_t max_iterations = 100;
  // CG restart period; defaults to the matrix size n
  std::optional<std::size_t> reset_period;
  // error metric recorded in the trace; defaults to |Qx - rho x|
  std::function<Scalar(const Vector<Scalar> &)> error_metric;
};

template <typename Scalar> struct EigenResult {
  explicit EigenResult(SpherePoint<Scalar> x) : eigenvector(std::move(x)) {}

  Scalar eigenvalue = 0;
  SpherePoint<Scalar> eigenvector;
  IterationTrace<Scalar> trace;
  std::vector<Vector<Scalar>> iterates;
  bool converged = false;
  std::size_t iterations = 0;
  EigenTermination termination = EigenTermination::MaxIterations;
};

namespace detail {

template <typename Scalar> class EigenRun {
public:
  EigenRun(const Matrix<Scalar> &Q, const SpherePoint<Scalar> &x0,
           const EigenConfig<Scalar> &config)
      : Q_(Q), config_(config), result_(x0), qnorm_(Q.norm()) {
    if (Q.rows() != Q.cols() || Q.rows() != x0.size())
      throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
    if (Q != Q.transpose())
      throw Error(ErrorCode::InvalidArgument, "Q must be exactly symmetric");
  }

  /// Records iterate i at x; returns the residual vector Qx - rho x.
  Vector<Scalar> record(std::size_t i, const Vector<Scalar> &x) {
    const Vector<Scalar> Qx = Q_ * x;
    const Scalar rho = x.dot(Qx);
    Vector<Scalar> r = Qx - rho * x;
    const Scalar error = config_.error_metric ? config_.error_metric(x) : r.norm();
    result_.trace.push({i, rho, Scalar(2) * r.norm(), error, 0});
    result_.iterates.push_back(x);
    result_.eigenvalue = rho;
    result_.eigenvector = SpherePoint<Scalar>(x);
    result_.iterations = i;
    return r;
  }

  bool small_residual(const Vector<Scalar> &r) const {
    return r.norm() <= config_.residual_tolerance * qnorm_;
  }

  EigenResult<Scalar> finish(EigenTermination why) {
    result_.termination = why;
    result_.converged = why != EigenTermination::MaxIterations &&
                        why != EigenTermination::Stagnated;
    return std::move(result_);
  }

  void set_step(Scalar step) { result_.trace.set_last_step(step); }

  const Matrix<Scalar> &Q() const { return Q_; }
  const EigenConfig<Scalar> &config() const { return config_; }

private:
  const Matrix<Scalar> &Q_;
  const EigenConfig<Scalar> &config_;
  EigenResult<Scalar> result_;
  Scalar qnorm_;
};

/// y = (Q - rho I)^{-1} x.  `singular` is set when the shift is an
/// eigenvalue to working precision; y is then still returned when finite,
/// since inverse iteration with such a shift points along the eigenvector.
template <typename Scalar> struct ShiftedSolve {
  Vector<Scalar> y;
  bool singular = false;
  bool finite = true;
};

template <typename Scalar>
ShiftedSolve<Scalar> shifted_solve(const Matrix<Scalar> &Q, Scalar rho,
                                   const Vector<Scalar> &x) {
  Matrix<Scalar> A = Q;
  A.diagonal().array() -= rho;
  Eigen::PartialPivLU<Matrix<Scalar>> lu(A);
  ShiftedSolve<Scalar> out;
  out.singular = numerically_singular(lu);
  out.y = lu.solve(x);
  out.finite = out.y.allFinite() && out.y.norm() > Scalar(0);
  return out;
}

template <typename Scalar> Vector<Scalar> unit(Vector<Scalar> v) {
  v /= v.norm();
  return v;
}

} // namespace detail

namespace detail {

/// Shared driver of the two shifted-inverse methods; `advance` maps (x, y)
/// to the next iterate.  When the shift turns singular the run is declared
/// converged.  If the residual is not yet small, one last step is taken with
/// the near-singular solve (its direction is the eigenvector to working
/// precision) so the reported eigenvector is not left at the previous,
/// less accurate iterate.
template <typename Scalar, typename Advance>
EigenResult<Scalar> shifted_inverse_run(const Matrix<Scalar> &Q,
                                        const SpherePoint<Scalar> &x0,
                                        const EigenConfig<Scalar> &config,
                                        Advance &&advance) {
  EigenRun<Scalar> run(Q, x0, config);
  Vector<Scalar> x = x0.vec();
  for (std::size_t i = 0;; ++i) {
    const Vector<Scalar> r = run.record(i, x);
    const bool converged = run.small_residual(r);
    const Scalar rho = x.dot(Q * x);
    const auto solve = shifted_solve(Q, rho, x);
    if (solve.singular) {
      if (!converged && solve.finite) {
        auto [next, step] = advance(x, solve.y);
        run.set_step(step);
        run.record(i + 1, next);
      }
      return run.finish(EigenTermination::SingularShift);
    }
    if (converged)
      return run.finish(EigenTermination::Residual);
    if (i >= config.max_iterations)
      return run.finish(EigenTermination::MaxIterations);
    auto [next, step] = advance(x, solve.y);
    run.set_step(step);
    x = std::move(next);
  }
}

} // namespace detail

/// Newton-Rayleigh quotient method:
///   y_i = (Q - rho(x_i) I)^{-1} x_i,  alpha_i = 1 / x_i^T y_i,
///   H_i = -x_i + alpha_i y_i,  theta_i = |H_i|,
///   x_{i+1} = x_i cos(theta_i) + H_i sin(theta_i) / theta_i.
template <typename Scalar>
EigenResult<Scalar> newton_rayleigh(const Matrix<Scalar> &Q,
                                    const SpherePoint<Scalar> &x0,
                                    const EigenConfig<Scalar> &config = {}) {
  auto advance = [](const Vector<Scalar> &x, const Vector<Scalar> &y) {
    const Scalar alpha = Scalar(1) / x.dot(y);
    const Vector<Scalar> H = -x + alpha * y;
    const Scalar theta = H.norm();
    if (!(theta > Scalar(0)))
      return std::pair{x, Scalar(0)};
    return std::pair{detail::unit<Scalar>(x * std::cos(theta) +
                                          H * (std::sin(theta) / theta)),
                     theta};
  };
  return detail::shifted_inverse_run(Q, x0, config, advance);
}

/// Rayleigh quotient iteration: x_{i+1} = y_i / |y_i|, with the sign chosen
/// so that x_{i+1}^T x_i > 0.
template <typename Scalar>
EigenResult<Scalar> rqi(const Matrix<Scalar> &Q, const SpherePoint<Scalar> &x0,
                        const EigenConfig<Scalar> &config = {}) {
  auto advance = [](const Vector<Scalar> &x, const Vector<Scalar> &y) {
    Vector<Scalar> next = detail::unit<Scalar>(y);
    if (next.dot(x) < Scalar(0))
      next = -next;
    const Scalar step = axis_angle<Scalar>(x, next);
    return std::pair{std::move(next), step};
  };
  return detail::shifted_inverse_run(Q, x0, config, advance);
}

/// Conjugate gradient for the largest eigenpair, maximizing x^T Q x with the
/// closed-form circle maximization and the sphere's parallel translation:
///   x_{i+1} = x_i c + h_i s,  tau H_i = H_i c - x_i |H_i| s,
///   tau G_i = G_i - (h_i^T G_i)(x_i s + h_i v),
///   G_{i+1} = (Q - rho(x_{i+1}) I) x_{i+1},
///   H_{i+1} = G_{i+1} + gamma_i tau H_i,
///   gamma_i = (G_{i+1} - tau G_i)^T G_{i+1} / G_i^T H_i,
/// with H_{i+1} = G_{i+1} whenever i = n - 1 (mod n).
template <typename Scalar>
EigenResult<Scalar> cg_extreme_eigen(const Matrix<Scalar> &Q,
                                     const SpherePoint<Scalar> &x0,
                                     const EigenConfig<Scalar> &config = {}) {
  detail::EigenRun<Scalar> run(Q, x0, config);
  const RayleighProblem<Scalar> prob(Q);
  const std::size_t period =
      config.reset_period.value_or(static_cast<std::size_t>(Q.rows()));
  if (period < 1)
    throw Error(ErrorCode::InvalidArgument, "reset period must be >= 1");

  Vector<Scalar> x = x0.vec();
  Vector<Scalar> G = run.record(0, x);
  if (run.small_residual(G))
    return run.finish(EigenTermination::ZeroGradient);
  Vector<Scalar> H = G;

  for (std::size_t i = 0;; ++i) {
    if (i >= config.max_iterations)
      return run.finish(EigenTermination::MaxIterations);

    const Scalar Hnorm = H.norm();
    const Vector<Scalar> h = H / Hnorm;
    const auto line = rayleigh_line_max(prob, SpherePoint<Scalar>(x), h);
    if (line.degenerate) {
      if (H != G) {
        H = G;
        continue;
      }
      return run.finish(EigenTermination::Stagnated);
    }
    const Scalar c = line.c, s = line.s, v = line.v;

    Vector<Scalar> x_next = detail::unit<Scalar>(x * c + h * s);
    const Vector<Scalar> tau_H = H * c - x * (Hnorm * s);
    const Vector<Scalar> tau_G = G - h.dot(G) * (x * s + h * v);
    run.set_step(line.angle());

    const Vector<Scalar> G_next = run.record(i + 1, x_next);
    if (run.small_residual(G_next))
      return run.finish(EigenTermination::Residual);

    const Scalar denom = G.dot(H);
    Vector<Scalar> H_next;
    if (i % period == period - 1 || denom == Scalar(0)) {
      H_next = G_next;
    } else {
      const Scalar gamma = (G_next - tau_G).dot(G_next) / denom;
      H_next = G_next + gamma * tau_H;
    }
    // keep H tangent at the renormalized iterate; the residual Qx - rho x
    // carries a round-off normal component that dominates near convergence
    H_next -= x_next.dot(H_next) * x_next;
    x = std::move(x_next);
    G = G_next;
    H = std::move(H_next);
  }
}

} // namespace riemann
