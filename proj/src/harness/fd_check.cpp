#include "riemann/harness/fd_check.hpp"

#include "riemann/brockett.hpp"
#include "riemann/jacobi.hpp"
#include "riemann/random.hpp"
#include "riemann/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace riemann::harness {

namespace {

using Vec = Vector<double>;
using Mat = Matrix<double>;

constexpr double fd_step = 1e-3;

// Fourth-order central differences of phi at 0.
template <typename Phi> double first_difference(const Phi &phi, double h) {
  return (phi(-2 * h) - 8 * phi(-h) + 8 * phi(h) - phi(2 * h)) / (12 * h);
}

template <typename Phi> double second_difference(const Phi &phi, double h) {
  return (-phi(-2 * h) + 16 * phi(-h) - 30 * phi(0.0) + 16 * phi(h) - phi(2 * h)) /
         (12 * h * h);
}

double relative(double fd, double analytic, double scale) {
  return std::abs(fd - analytic) / std::max(1.0, scale);
}

template <typename Phi>
FdSample sample(const char *family, int n, std::size_t k, const Phi &phi,
                double directional, double grad_norm, double form) {
  return {family, n, k,
          relative(first_difference(phi, fd_step), directional, grad_norm),
          relative(second_difference(phi, fd_step), form, std::abs(form))};
}

} // namespace

bool FdCheckResult::passed() const {
  return std::all_of(families.begin(), families.end(),
                     [](const FdFamilySummary &f) { return f.passed(); });
}

FdCheckResult run_fd_check(std::uint64_t seed, std::size_t instances) {
  FdCheckResult out;
  Rng rng(seed);

  constexpr int rayleigh_n = 8, brockett_n = 6, jacobi_n = 5;
  for (std::size_t k = 0; k < instances; ++k) {
    const RayleighProblem<double> p(random_symmetric(rng, rayleigh_n));
    const auto x = random_sphere_point(rng, rayleigh_n);
    const Vec u = random_unit_tangent(rng, x);
    const auto phi = [&](double t) { return rayleigh_value(p, sphere_exp(x, u, t)); };
    const Vec g = rayleigh_gradient(p, x);
    out.samples.push_back(sample("rayleigh", rayleigh_n, k, phi, g.dot(u), g.norm(),
                                 rayleigh_hessian_form(p, x, u, u)));
  }
  for (std::size_t k = 0; k < instances; ++k) {
    const BrockettProblem<double> p(random_symmetric(rng, brockett_n),
                                    Vec::LinSpaced(brockett_n, brockett_n, 1));
    const auto theta = random_rotation(rng, brockett_n);
    const Mat X = random_unit_skew(rng, brockett_n);
    const auto phi = [&](double t) { return brockett_value(p, so_geodesic(theta, X, t)); };
    const Mat G = brockett_gradient(p, theta);
    out.samples.push_back(sample("brockett", brockett_n, k, phi, skew_inner(G, X),
                                 std::sqrt(skew_inner(G, G)),
                                 brockett_hessian_form(p, theta, X, X)));
  }
  for (std::size_t k = 0; k < instances; ++k) {
    const JacobiProblem<double> p(random_symmetric(rng, jacobi_n));
    const auto theta = random_rotation(rng, jacobi_n);
    const Mat X = random_unit_skew(rng, jacobi_n);
    const auto phi = [&](double t) { return jacobi_value(p, so_geodesic(theta, X, t)); };
    const Mat G = jacobi_gradient(p, theta);
    out.samples.push_back(sample("jacobi", jacobi_n, k, phi, skew_inner(G, X),
                                 std::sqrt(skew_inner(G, G)),
                                 skew_inner(jacobi_hessian_apply(p, theta, X), X)));
  }

  for (const auto &s : out.samples) {
    if (out.families.empty() || out.families.back().family != s.family)
      out.families.push_back({s.family, s.n, 0, 0, 0});
    auto &f = out.families.back();
    ++f.instances;
    f.max_gradient_error = std::max(f.max_gradient_error, s.gradient_error);
    f.max_hessian_error = std::max(f.max_hessian_error, s.hessian_error);
  }
  return out;
}

} // namespace riemann::harness
