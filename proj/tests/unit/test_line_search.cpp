#include "euclidean.hpp"
#include "riemann/brockett.hpp"
#include "riemann/line_search.hpp"
#include "riemann/random.hpp"
#include "riemann/sphere.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace riemann;
using testing_support::Quadratic;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

template <typename Fn> ErrorCode code_of(Fn &&fn) {
  try {
    fn();
  } catch (const Error &err) {
    return err.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

SolverConfig<double> golden() {
  SolverConfig<double> c;
  c.line_search = LineSearchKind::Golden;
  return c;
}

} // namespace

TEST(GoldenSection, ParabolaVertex) {
  // f(x) = (x - 1)^2 along x = t from 0
  const Quadratic f(Mat::Constant(1, 1, 2.0), Vec::Constant(1, 1.0));
  for (double initial : {1e-3, 0.7, 1.0, 40.0}) {
    auto phi = [&](double t) { return f.value(Vec::Constant(1, t)); };
    const auto r = golden_section_minimize<double>(phi, 1.0, initial, 2.0, 1e-10, 200);
    EXPECT_NEAR(r.step, 1.0, 1e-8) << initial;
    EXPECT_LE(r.value, 1.0);
    EXPECT_LE(r.evaluations, 200u);
  }
  const auto r = line_minimize_geodesic(f, Vec::Zero(1), Vec::Ones(1), golden());
  EXPECT_NEAR(r.step, 1.0, 1e-8);
}

TEST(GoldenSection, Errors) {
  const Quadratic f(Mat::Constant(1, 1, 2.0), Vec::Constant(1, 1.0));
  EXPECT_EQ(code_of([&] { line_minimize_geodesic(f, Vec::Zero(1), Vec(-Vec::Ones(1)), golden()); }),
            ErrorCode::NoDecrease);
  EXPECT_EQ(code_of([&] { line_minimize_geodesic(f, Vec::Zero(1), Vec::Zero(1), golden()); }),
            ErrorCode::InvalidArgument);
  auto tight = golden();
  tight.max_line_evaluations = 3;
  EXPECT_EQ(code_of([&] { line_minimize_geodesic(f, Vec::Zero(1), Vec::Ones(1), tight); }),
            ErrorCode::MaxEvaluations);
  // constant function: nothing ever decreases
  auto flat = [](double) { return 1.0; };
  EXPECT_EQ(code_of([&] { golden_section_minimize<double>(flat, 1.0, 1.0, 2.0, 1e-10, 500); }),
            ErrorCode::NoDecrease);
}

TEST(LineSearch, SphereClosedFormMatchesGolden) {
  Rng rng(50);
  for (int k = 0; k < 10; ++k) {
    const RayleighMaximization<double> f(RayleighProblem<double>(random_symmetric(rng, 7)));
    const auto x = random_sphere_point(rng, 7);
    const Vec H = -f.gradient(x);
    SolverConfig<double> exact;
    const auto a = line_minimize_geodesic(f, x, H, exact);
    const auto b = line_minimize_geodesic(f, x, H, golden());
    EXPECT_NEAR(a.step, b.step, 1e-5);
    EXPECT_LE(a.value, f.value(x));
    EXPECT_LE(a.value, b.value + 1e-12);
  }
}

TEST(LineSearch, EstimateKindUsesBrockettBound) {
  Rng rng(51);
  const BrockettMaximization<double> f(
      BrockettProblem<double>(random_symmetric(rng, 5), Vec::LinSpaced(5, 5, 1)));
  const auto theta = random_rotation(rng, 5);
  const Mat H = -f.gradient(theta);
  SolverConfig<double> est;
  est.line_search = LineSearchKind::Estimate;
  const auto r = line_minimize_geodesic(f, theta, H, est);
  EXPECT_DOUBLE_EQ(r.step, brockett_step_estimate(f.problem(), theta, H));
  EXPECT_LE(r.value, f.value(theta));
  // golden section on the same line does at least as well
  const auto g = line_minimize_geodesic(f, theta, H, golden());
  EXPECT_LE(g.value, r.value + 1e-12);
}

TEST(SolverConfig, Validates) {
  SolverConfig<double> c;
  EXPECT_NO_THROW(c.validate());
  c.gradient_tolerance = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.reset_period = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.golden_growth = 1.0;
  EXPECT_THROW(c.validate(), Error);
}
