#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace riemann::harness {

inline constexpr double fd_gradient_tolerance = 1e-6;
inline constexpr double fd_hessian_tolerance = 1e-5;

/// One random instance: relative errors of the analytic directional
/// derivative and Hessian form against central differences along a geodesic.
struct FdSample {
  std::string family;
  int n = 0;
  std::size_t instance = 0;
  double gradient_error = 0;
  double hessian_error = 0;
};

struct FdFamilySummary {
  std::string family;
  int n = 0;
  std::size_t instances = 0;
  double max_gradient_error = 0;
  double max_hessian_error = 0;
  bool passed() const {
    return max_gradient_error < fd_gradient_tolerance &&
           max_hessian_error < fd_hessian_tolerance;
  }
};

struct FdCheckResult {
  std::vector<FdSample> samples;
  std::vector<FdFamilySummary> families;
  bool passed() const;
};

/// Rayleigh quotient on S^{n-1} (n = 8), Brockett on SO(6) and Jacobi on
/// SO(5), `instances` seeded draws each, along unit directions X.  Errors
/// are |fd - <grad, X>| / max(1, |grad|) and |fd - hess(X, X)| /
/// max(1, |hess(X, X)|).
FdCheckResult run_fd_check(std::uint64_t seed, std::size_t instances = 20);

} // namespace riemann::harness
