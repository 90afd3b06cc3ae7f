#include "riemann/harness/experiment.hpp"

#include "riemann/brockett.hpp"
#include "riemann/eigensolvers.hpp"
#include "riemann/jacobi.hpp"
#include "riemann/random.hpp"
#include "riemann/solvers.hpp"
#include "riemann/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace riemann::harness {

namespace {

using Vec = Vector<double>;
using Mat = Matrix<double>;

SolverConfig<double> solver_config(const ExperimentSpec &s) {
  SolverConfig<double> c;
  c.gradient_tolerance = *s.tolerance;
  c.max_iterations = *s.max_iterations;
  c.line_search = *s.line_search;
  c.reset_period = s.reset_period;
  return c;
}

void finish(RunReport &r) {
  const auto &t = r.trace.trace;
  r.iterations = t.back().index;
  r.final_objective = t.back().value;
  r.final_error = t.back().error;
  try {
    r.order = fit_order(t.errors());
  } catch (const Error &e) {
    r.order_note = e.what();
  }
}

/// Solvers minimize the negated objective; the CSV reports the objective.
template <typename Result>
void take_solver_result(RunReport &r, const Result &res, const char *column) {
  r.trace.value_column = column;
  for (auto rec : res.trace) {
    rec.value = -rec.value;
    r.trace.trace.push(rec);
  }
  r.status = std::string(to_string(res.status));
  r.converged = res.converged();
  r.message = res.message;
  finish(r);
}

template <typename Solve>
auto run_generic(const ExperimentSpec &s, Solve &&solve_with) {
  const auto c = solver_config(s);
  switch (*s.method) {
  case Method::Sd: return solve_with([&](const auto &f, const auto &p) { return steepest_descent(f, p, c); });
  case Method::Cg: return solve_with([&](const auto &f, const auto &p) { return conjugate_gradient(f, p, c); });
  case Method::Newton: return solve_with([&](const auto &f, const auto &p) { return newton(f, p, c); });
  default: throw Error(ErrorCode::InvalidArgument, "method not available for this experiment");
  }
}

void rotation_metrics(RunReport &r, const Mat &Q, const std::vector<Rotation<double>> &iterates) {
  Eigen::SelfAdjointEigenSolver<Mat> base(Q, Eigen::EigenvaluesOnly);
  double spectrum = 0, orthogonality = 0;
  for (const auto &theta : iterates) {
    const Mat H = conjugated(Q, theta);
    Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
    spectrum = std::max(spectrum,
                        (es.eigenvalues() - base.eigenvalues()).cwiseAbs().maxCoeff());
    orthogonality = std::max(orthogonality, orthogonality_residual(theta.mat()));
  }
  r.metrics.emplace_back("max_isospectral_drift", spectrum);
  r.metrics.emplace_back("max_orthogonality_drift", orthogonality);
}

void sphere_metrics(RunReport &r, double top, const std::vector<Vec> &iterates) {
  double drift = 0;
  for (const auto &x : iterates)
    drift = std::max(drift, std::abs(x.norm() - 1.0));
  r.metrics.emplace_back("max_unit_norm_drift", drift);
  r.metrics.emplace_back("eigenvalue_error", std::abs(r.final_objective - top));
}

Rotation<double> so_start(Rng &rng, const InitMode &init, const Rotation<double> &optimum) {
  const auto n = optimum.mat().rows();
  if (!init.near)
    return random_rotation(rng, n);
  return so_geodesic(optimum, random_unit_skew(rng, n), init.eps);
}

} // namespace

RunReport run_fig1(const ExperimentSpec &spec) {
  const ExperimentSpec s = spec.resolved();
  RunReport r;
  r.spec = s;
  const int n = *s.n;
  const Mat Q = Vec::LinSpaced(n, n, 1).asDiagonal();
  const Vec e1 = Vec::Unit(n, 0);

  Rng rng(s.seed);
  SpherePoint<double> x0 = random_sphere_point(rng, n);
  if (s.init->near) {
    const SpherePoint<double> top(e1);
    x0 = sphere_exp(top, random_unit_tangent(rng, top), s.init->eps);
  }

  const Method m = *s.method;
  if (m == Method::Cg || m == Method::Rqi || m == Method::NewtonRq) {
    EigenConfig<double> c;
    c.residual_tolerance = *s.tolerance / (2 * Q.norm());
    c.max_iterations = *s.max_iterations;
    c.reset_period = s.reset_period;
    c.error_metric = [&e1](const Vec &x) { return axis_angle<double>(e1, x); };
    const auto res = m == Method::Cg   ? cg_extreme_eigen(Q, x0, c)
                     : m == Method::Rqi ? rqi(Q, x0, c)
                                        : newton_rayleigh(Q, x0, c);
    r.trace = {"rho", res.trace};
    r.status = std::string(to_string(res.termination));
    r.converged = res.converged;
    finish(r);
    sphere_metrics(r, n, res.iterates);
    return r;
  }

  const RayleighMaximization<double> f(RayleighProblem<double>(Q), e1);
  run_generic(s, [&](auto solve) {
    const auto res = solve(f, x0);
    take_solver_result(r, res, "rho");
    std::vector<Vec> xs;
    for (const auto &p : res.iterates)
      xs.push_back(p.vec());
    sphere_metrics(r, n, xs);
    return 0;
  });
  return r;
}

RunReport run_fig2(const ExperimentSpec &spec) {
  const ExperimentSpec s = spec.resolved();
  RunReport r;
  r.spec = s;
  const int n = *s.n;
  const Vec nu = Vec::LinSpaced(n, n, 1);

  Rng rng(s.seed);
  Rotation<double> V = Rotation<double>::identity(n);
  const Mat Q = random_symmetric_with_spectrum(rng, nu, &V);
  const Rotation<double> theta0 = so_start(rng, *s.init, V);

  const BrockettMaximization<double> f(BrockettProblem<double>(Q, nu));
  run_generic(s, [&](auto solve) {
    const auto res = solve(f, theta0);
    take_solver_result(r, res, "f");
    rotation_metrics(r, Q, res.iterates);
    return 0;
  });
  return r;
}

RunReport run_jacobi_from(const ExperimentSpec &spec, const Mat &Q,
                          const Rotation<double> &theta0) {
  const ExperimentSpec s = spec.resolved();
  RunReport r;
  r.spec = s;
  const JacobiMaximization<double> f{JacobiProblem<double>(Q)};
  run_generic(s, [&](auto solve) {
    const auto res = solve(f, theta0);
    take_solver_result(r, res, "f");
    rotation_metrics(r, Q, res.iterates);
    return 0;
  });
  return r;
}

RunReport run_jacobi(const ExperimentSpec &spec) {
  const ExperimentSpec s = spec.resolved();
  const int n = *s.n;
  Rng rng(s.seed);
  Rotation<double> V = Rotation<double>::identity(n);
  const Mat Q = random_symmetric_with_spectrum(rng, Vec(Vec::LinSpaced(n, n, 1)), &V);
  return run_jacobi_from(s, Q, so_start(rng, *s.init, V));
}

} // namespace riemann::harness
