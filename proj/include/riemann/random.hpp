#pragma once

#include "riemann/core.hpp"
#include "riemann/rotation.hpp"
#include "riemann/sphere.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace riemann {

/// Seedable generator with output that is identical on every platform:
/// std::mt19937_64 (fully specified by the standard) feeding our own
/// uniform and Box-Muller normal transforms (the std distributions are
/// implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller; the second deviate is cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * EIGEN_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  template <typename Scalar = double> Vector<Scalar> normal_vector(Eigen::Index n) {
    Vector<Scalar> v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = static_cast<Scalar>(normal());
    return v;
  }

  template <typename Scalar = double>
  Matrix<Scalar> normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix<Scalar> M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i)
        M(i, j) = static_cast<Scalar>(normal());
    return M;
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Uniformly distributed point on S^{n-1} (normalized standard normal).
template <typename Scalar = double>
SpherePoint<Scalar> random_sphere_point(Rng &rng, Eigen::Index n) {
  return SpherePoint<Scalar>::normalized(rng.normal_vector<Scalar>(n));
}

/// Unit tangent at x with uniformly distributed direction.
template <typename Scalar = double>
Vector<Scalar> random_unit_tangent(Rng &rng, const SpherePoint<Scalar> &x) {
  Vector<Scalar> v = project_tangent(x, rng.normal_vector<Scalar>(x.size()));
  return v / v.norm();
}

/// Symmetric matrix with standard normal upper triangle.
template <typename Scalar = double>
Matrix<Scalar> random_symmetric(Rng &rng, Eigen::Index n) {
  const Matrix<Scalar> A = rng.normal_matrix<Scalar>(n, n);
  return A + A.transpose();
}

/// Skew matrix with unit Frobenius norm.
template <typename Scalar = double>
Matrix<Scalar> random_unit_skew(Rng &rng, Eigen::Index n) {
  const Matrix<Scalar> A = rng.normal_matrix<Scalar>(n, n);
  Matrix<Scalar> X = A - A.transpose();
  return X / X.norm();
}

/// Haar-distributed element of SO(n): QR of a Gaussian matrix with the signs
/// of R's diagonal absorbed, then one column flipped if det = -1.
template <typename Scalar = double>
Rotation<Scalar> random_rotation(Rng &rng, Eigen::Index n) {
  const Matrix<Scalar> A = rng.normal_matrix<Scalar>(n, n);
  Eigen::HouseholderQR<Matrix<Scalar>> qr(A);
  Matrix<Scalar> Qm = qr.householderQ() * Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> R = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (R(j, j) < Scalar(0))
      Qm.col(j) = -Qm.col(j);
  if (Qm.determinant() < Scalar(0))
    Qm.col(0) = -Qm.col(0);
  return Rotation<Scalar>::from_nearly_orthogonal(std::move(Qm));
}

/// V diag(spectrum) V^T for a random rotation V, exactly symmetric.
template <typename Scalar = double>
Matrix<Scalar> random_symmetric_with_spectrum(Rng &rng,
                                              const Vector<Scalar> &spectrum,
                                              Rotation<Scalar> *basis = nullptr) {
  const Rotation<Scalar> V = random_rotation<Scalar>(rng, spectrum.size());
  Matrix<Scalar> Q = V.mat() * spectrum.asDiagonal() * V.mat().transpose();
  Q = (Scalar(0.5) * (Q + Q.transpose())).eval();
  if (basis)
    *basis = V;
  return Q;
}

} // namespace riemann
