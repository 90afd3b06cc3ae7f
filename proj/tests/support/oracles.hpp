#pragma once

// Independent reference computations used only by the tests: finite
// differences, ODE integration of the transport equations, truncated series,
// dense solves in an explicit basis and brute-force scans.  None of these
// call into the code paths they are used to check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// First derivative at 0, 4th-order central stencil.
inline double diff1(const std::function<double(double)> &phi, double h) {
  return (-phi(2 * h) + 8 * phi(h) - 8 * phi(-h) + phi(-2 * h)) / (12 * h);
}

/// Second derivative at 0, 4th-order central stencil.
inline double diff2(const std::function<double(double)> &phi, double h) {
  return (-phi(2 * h) + 16 * phi(h) - 30 * phi(0) + 16 * phi(-h) - phi(-2 * h)) /
         (12 * h * h);
}

/// Third derivative at 0, 4th-order central stencil.
inline double diff3(const std::function<double(double)> &phi, double h) {
  return (-phi(3 * h) + 8 * phi(2 * h) - 13 * phi(h) + 13 * phi(-h) -
          8 * phi(-2 * h) + phi(-3 * h)) /
         (8 * h * h * h);
}

/// Classical RK4 for y' = F(t, y) on [0, T] with `steps` steps.
template <typename State, typename Rhs>
State rk4(const Rhs &F, State y, double T, int steps) {
  const double dt = T / steps;
  double t = 0;
  for (int k = 0; k < steps; ++k) {
    const State k1 = F(t, y);
    const State k2 = F(t + dt / 2, State(y + dt / 2 * k1));
    const State k3 = F(t + dt / 2, State(y + dt / 2 * k2));
    const State k4 = F(t + dt, State(y + dt * k3));
    y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += dt;
  }
  return y;
}

/// Parallel transport on the embedded unit sphere along gamma(t) =
/// x cos t + h sin t: the tangential part of V' vanishes, so
/// V' = -(gamma'^T V) gamma.
inline Vec sphere_transport_ode(const Vec &x, const Vec &h, double T,
                                const Vec &v, int steps = 20000) {
  auto F = [&](double t, const Vec &V) -> Vec {
    const Vec gamma = x * std::cos(t) + h * std::sin(t);
    const Vec dgamma = -x * std::sin(t) + h * std::cos(t);
    return -dgamma.dot(V) * gamma;
  };
  return rk4<Vec>(F, v, T, steps);
}

/// Parallel transport on SO(n) (bi-invariant metric) in left-translated
/// coordinates along Theta e^{tX}: Y' = -[X, Y] / 2.
inline Mat so_transport_ode(const Mat &X, const Mat &Y, double T,
                            int steps = 20000) {
  auto F = [&](double, const Mat &Z) -> Mat { return -0.5 * (X * Z - Z * X); };
  return rk4<Mat>(F, Y, T, steps);
}

/// sum_{k < terms} A^k / k!
inline Mat series_exp(const Mat &A, int terms = 30) {
  Mat sum = Mat::Identity(A.rows(), A.cols());
  Mat term = Mat::Identity(A.rows(), A.cols());
  for (int k = 1; k < terms; ++k) {
    term = term * A / k;
    sum += term;
  }
  return sum;
}

inline Mat E(int n, int i, int j) {
  Mat M = Mat::Zero(n, n);
  M(i, j) = 1;
  M(j, i) = -1;
  return M;
}

/// Matrix of a linear operator on so(n) in the basis E_ij (i < j).
inline Mat dense_skew_operator(const std::function<Mat(const Mat &)> &op, int n) {
  const int d = n * (n - 1) / 2;
  Mat A(d, d);
  int col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++col) {
      const Mat image = op(E(n, i, j));
      int row = 0;
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l, ++row)
          A(row, col) = image(k, l);
    }
  return A;
}

inline Vec skew_coefficients(const Mat &X) {
  const int n = static_cast<int>(X.rows());
  Vec v(n * (n - 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      v(k++) = X(i, j);
  return v;
}

inline Mat skew_from_coefficients(const Vec &v, int n) {
  Mat X = Mat::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      X(i, j) = v(k);
      X(j, i) = -v(k);
    }
  return X;
}

/// Solves op(X) = rhs on so(n) by a dense LU in the E_ij basis.
inline Mat dense_skew_solve(const std::function<Mat(const Mat &)> &op,
                            const Mat &rhs) {
  const int n = static_cast<int>(rhs.rows());
  const Mat A = dense_skew_operator(op, n);
  const Vec c = A.fullPivLu().solve(skew_coefficients(rhs));
  return skew_from_coefficients(c, n);
}

/// Argmax of phi on [a, b) sampled with the given spacing.
inline double scan_argmax(const std::function<double(double)> &phi, double a,
                          double b, double spacing) {
  double best_t = a, best = -std::numeric_limits<double>::infinity();
  for (double t = a; t < b; t += spacing) {
    const double v = phi(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

/// Distance between two angles on a circle of period `period`.
inline double periodic_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

} // namespace oracle
