#include "euclidean.hpp"
#include "riemann/brockett.hpp"
#include "riemann/random.hpp"
#include "riemann/solvers.hpp"
#include "riemann/sphere.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <span>
#include <vector>

using namespace riemann;
using testing_support::Euclidean;
using testing_support::Quadratic;
using testing_support::QuadraticWithExactStep;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Pt = SpherePoint<double>;

namespace {

Mat spd(Rng &rng, int d) {
  const Mat G = rng.normal_matrix(d, d);
  return G * G.transpose() + Mat::Identity(d, d);
}

RayleighMaximization<double> fig1_problem(int n = 21) {
  return RayleighMaximization<double>(
      RayleighProblem<double>(Mat(Vec::LinSpaced(n, n, 1).asDiagonal())));
}

SolverConfig<double> tol(double g) {
  SolverConfig<double> c;
  c.gradient_tolerance = g;
  return c;
}

template <typename Trace> std::size_t first_below(const Trace &trace, double e) {
  for (const auto &r : trace)
    if (r.error < e)
      return r.index;
  return trace.back().index + 1;
}

// Least-squares slope of log e_{i+d} against log e_i over all pairs above floor.
double window_order(const std::vector<double> &e, std::size_t d, double floor) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i + d < e.size(); ++i)
    if (e[i + d] > floor) {
      x.push_back(std::log(e[i]));
      y.push_back(std::log(e[i + d]));
    }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k)
    mx += x[k], my += y[k];
  mx /= double(x.size());
  my /= double(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

// f(x) = sqrt(1 + x^2): Newton maps x to -x^3, diverging for |x| > 1.
struct Hyperbola {
  using Manifold = Euclidean;
  Euclidean m{1};
  const Manifold &manifold() const { return m; }
  double value(const Vec &x) const { return std::sqrt(1 + x(0) * x(0)); }
  Vec gradient(const Vec &x) const { return x / value(x); }
  double error(const Vec &x) const { return std::abs(x(0)); }
  Vec newton_direction(const Vec &x) const {
    return Vec::Constant(1, -x(0) * (1 + x(0) * x(0)));
  }
};

// A quadratic whose Hessian solve always reports indefiniteness.
struct IndefiniteQuadratic : Quadratic {
  using Quadratic::Quadratic;
  Vec newton_direction(const Vec &) const {
    throw Error(ErrorCode::IndefiniteOperator, "test");
  }
};

} // namespace

TEST(SteepestDescent, EuclideanQuadratic) {
  Rng rng(60);
  const QuadraticWithExactStep f(spd(rng, 4), rng.normal_vector(4));
  const auto r = steepest_descent(f, Vec(Vec::Zero(4)), tol(1e-10));
  EXPECT_TRUE(r.converged());
  EXPECT_LT(r.trace.back().error, 1e-9);
}

TEST(Solvers, CriticalStartStopsImmediately) {
  const Quadratic f(Mat::Identity(3, 3), Vec::Ones(3));
  const Vec c = Vec::Ones(3);
  const auto sd = steepest_descent(f, c, tol(1e-12));
  const auto cg = conjugate_gradient(f, c, tol(1e-12));
  const auto nt = newton(f, c, tol(1e-12));
  for (const auto *r : {&sd, &cg, &nt}) {
    EXPECT_TRUE(r->converged());
    EXPECT_EQ(r->trace.size(), 1u);
  }
  const auto g = fig1_problem(5);
  const Pt top(Vec::Unit(5, 0));
  EXPECT_EQ(steepest_descent(g, top, tol(1e-12)).trace.size(), 1u);
}

TEST(ConjugateGradient, QuadraticInAtMostDimensionSteps) {
  Rng rng(61);
  for (int d : {2, 5, 8}) {
    const QuadraticWithExactStep f(spd(rng, d), rng.normal_vector(d));
    auto c = tol(1e-9);
    c.reset_period = static_cast<std::size_t>(d);
    const auto r = conjugate_gradient(f, Vec(Vec::Zero(d)), c);
    EXPECT_TRUE(r.converged());
    EXPECT_LE(r.trace.back().index, static_cast<std::size_t>(d + 1));
  }
}

TEST(ConjugateGradient, SmallSphereMatchesDenseEigensolve) {
  Rng rng(62);
  const RayleighMaximization<double> f(RayleighProblem<double>(random_symmetric(rng, 3)));
  const auto r = conjugate_gradient(f, random_sphere_point(rng, 3), tol(1e-12));
  EXPECT_TRUE(r.converged());
  EXPECT_LT(r.trace.back().error, 1e-10);
  EXPECT_LE(r.trace.back().index, 10u);
}

TEST(Newton, EuclideanQuadraticInOneStep) {
  Rng rng(63);
  const Quadratic f(spd(rng, 5), rng.normal_vector(5));
  const auto r = newton(f, Vec(Vec::Zero(5)), tol(1e-10));
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.trace.back().index, 1u);
  EXPECT_EQ(r.trace[0].step, 1.0);
}

TEST(Solvers, DescentInvariant) {
  Rng rng(64);
  for (int k = 0; k < 5; ++k) {
    const RayleighMaximization<double> f(RayleighProblem<double>(random_symmetric(rng, 8)));
    const Pt x0 = random_sphere_point(rng, 8);
    for (const auto &r : {steepest_descent(f, x0, tol(1e-10)),
                          conjugate_gradient(f, x0, tol(1e-10))}) {
      for (std::size_t i = 1; i < r.trace.size(); ++i)
        EXPECT_LE(r.trace[i].value,
                  r.trace[i - 1].value + 1e-12 * std::abs(r.trace[i - 1].value));
    }
  }
}

TEST(SteepestDescent, NinetyDegreeTurns) {
  Rng rng(65);
  const auto f = fig1_problem(10);
  const auto &M = f.manifold();
  const auto r = steepest_descent(f, random_sphere_point(rng, 10), tol(1e-10));
  ASSERT_TRUE(r.converged());
  for (std::size_t i = 0; i + 1 < r.iterates.size(); ++i) {
    const Vec G = -f.gradient(r.iterates[i]);
    const Vec G_next = -f.gradient(r.iterates[i + 1]);
    const Vec tau_G = M.transport(r.iterates[i], G, r.trace[i].step, G);
    EXPECT_LE(std::abs(G_next.dot(tau_G)), 1e-8 * G_next.norm() * G.norm()) << i;
  }
}

TEST(ConjugateGradient, ExactLineSearchOrthogonality) {
  Rng rng(66);
  const auto f = fig1_problem();
  std::size_t steps = 0;
  auto observe = [&](const auto &s) {
    ++steps;
    EXPECT_LE(std::abs(s.G_next.dot(s.tau_H)), 1e-8 * s.G_next.norm() * s.H.norm())
        << s.index;
  };
  const auto r = conjugate_gradient(f, random_sphere_point(rng, 21), tol(1e-10), observe);
  EXPECT_TRUE(r.converged());
  EXPECT_GT(steps, 0u);
}

TEST(ConjugateGradient, ApproximateConjugacyNearOptimum) {
  Rng rng(67);
  const auto f = fig1_problem();
  struct Step {
    std::size_t index;
    Vec tau_H, H_next;
    bool reset;
  };
  std::vector<Step> steps;
  auto observe = [&](const auto &s) { steps.push_back({s.index, s.tau_H, s.H_next, s.reset}); };
  const auto r = conjugate_gradient(f, random_sphere_point(rng, 21), tol(1e-10), observe);
  ASSERT_TRUE(r.converged());
  std::size_t checked = 0;
  for (const auto &s : steps) {
    const Pt &next = r.iterates[s.index + 1];
    if (s.reset || r.trace[s.index + 1].error > 1e-3)
      continue;
    const Vec HtauH = f.hessian_apply(next, s.tau_H);
    const double defect = std::abs(HtauH.dot(s.H_next)) /
                          (HtauH.dot(s.tau_H) * s.H_next.norm() / s.tau_H.norm());
    EXPECT_LE(defect, 0.1) << s.index;
    ++checked;
  }
  EXPECT_GT(checked, 5u);
}

TEST(Solvers, TraceErrorsRecomputeExactly) {
  Rng rng(68);
  const auto f = fig1_problem(8);
  const auto r = conjugate_gradient(f, random_sphere_point(rng, 8), tol(1e-10));
  ASSERT_EQ(r.iterates.size(), r.trace.size());
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    EXPECT_EQ(f.error(r.iterates[i]), r.trace[i].error);
    EXPECT_EQ(f.value(r.iterates[i]), r.trace[i].value);
  }
}

TEST(Solvers, Deterministic) {
  const auto f = fig1_problem();
  Rng a(69), b(69);
  const auto r1 = conjugate_gradient(f, random_sphere_point(a, 21), tol(1e-10));
  const auto r2 = conjugate_gradient(f, random_sphere_point(b, 21), tol(1e-10));
  EXPECT_EQ(r1.trace, r2.trace);
  EXPECT_EQ(r1.point, r2.point);
}

TEST(SteepestDescent, Fig1LinearConvergence) {
  Rng rng(1);
  const auto f = fig1_problem();
  const Pt x0 = random_sphere_point(rng, 21);
  const auto sd = steepest_descent(f, x0, tol(1e-10));
  ASSERT_TRUE(sd.converged());
  const auto errors = sd.trace.errors();
  const auto fit = estimate_order(errors, pre_stagnation_window(std::span<const double>(errors)));
  EXPECT_NEAR(fit.order, 1.0, 0.2);
  EXPECT_LT(fit.rate, 1.0);

  const auto cg = conjugate_gradient(f, x0, tol(1e-10));
  ASSERT_TRUE(cg.converged());
  EXPECT_LT(cg.trace.size(), sd.trace.size());
  EXPECT_LT(first_below(cg.trace, 1e-10), first_below(sd.trace, 1e-10));
}

TEST(ConjugateGradient, WindowedOrderOnSphereTail) {
  const auto f = fig1_problem();
  for (std::uint64_t seed : {1, 2, 3}) {
    Rng rng(seed);
    const auto r = conjugate_gradient(f, random_sphere_point(rng, 21), tol(1e-10));
    ASSERT_TRUE(r.converged());
    EXPECT_GE(window_order(r.trace.errors(), f.manifold().dimension(), 1e-13), 1.5) << seed;
  }
}

TEST(Newton, RayleighCubic) {
  Rng rng(70);
  const auto f = fig1_problem();
  const Pt e1(Vec::Unit(21, 0));
  const auto r = newton(f, sphere_exp(e1, random_unit_tangent(rng, e1), 1e-1), tol(1e-12));
  EXPECT_TRUE(r.converged());
  const auto errors = r.trace.errors();
  const auto window = pre_stagnation_window(std::span<const double>(errors));
  EXPECT_GE(estimate_order(errors, window).order, 2.5);
}

TEST(SteepestDescent, BrockettEstimateStepsAreMonotone) {
  Rng rng(71);
  const int n = 10;
  const BrockettMaximization<double> f(
      BrockettProblem<double>(random_symmetric(rng, n), Vec::LinSpaced(n, n, 1)));
  auto c = tol(1e-8);
  c.line_search = LineSearchKind::Estimate;
  c.max_iterations = 300;
  const auto r = steepest_descent(f, random_rotation(rng, n), c);
  ASSERT_GT(r.trace.size(), 10u);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    EXPECT_LT(r.trace[i].value, r.trace[i - 1].value) << i;
}

TEST(Newton, BrockettNearMaximum) {
  Rng rng(72);
  const int n = 10;
  Rotation<double> V = Rotation<double>::identity(n);
  const Vec nu = Vec::LinSpaced(n, n, 1);
  const Mat Q = random_symmetric_with_spectrum(rng, nu, &V);
  const BrockettMaximization<double> f(BrockettProblem<double>(Q, nu));
  auto c = tol(1e-12);
  c.error_tolerance = 1e-9;
  const auto r = newton(f, so_geodesic(V, random_unit_skew(rng, n), 1e-2), c);
  EXPECT_TRUE(r.converged());
  EXPECT_LT(r.trace.back().error, 1e-9);
  EXPECT_LE(r.trace.back().index, 3u);
}

TEST(Newton, DivergenceGuard) {
  const auto r = newton(Hyperbola{}, Vec(Vec::Constant(1, 1.02)), tol(1e-12));
  EXPECT_EQ(r.status, SolverStatus::Diverged);
}

TEST(Newton, IndefiniteFallback) {
  Rng rng(73);
  const IndefiniteQuadratic f(spd(rng, 3), rng.normal_vector(3));
  const Vec x0 = Vec::Zero(3);
  auto c = tol(1e-8);
  c.line_search = LineSearchKind::Golden;
  EXPECT_EQ(newton(f, x0, c).status, SolverStatus::IndefiniteOperator);
  c.newton_fallback = NewtonFallback::GradientStep;
  const auto r = newton(f, x0, c);
  EXPECT_TRUE(r.converged());
}

TEST(Solvers, LineSearchFailureIsReported) {
  // an objective that increases along its own negative gradient
  struct Liar : Quadratic {
    using Quadratic::Quadratic;
    Vec gradient(const Vec &x) const { return -Quadratic::gradient(x); }
  };
  const Liar f(Mat::Identity(2, 2), Vec::Ones(2));
  auto c = tol(1e-10);
  c.line_search = LineSearchKind::Golden;
  const auto r = steepest_descent(f, Vec(Vec::Zero(2)), c);
  EXPECT_EQ(r.status, SolverStatus::LineSearchFailed);
  EXPECT_FALSE(r.message.empty());
}
