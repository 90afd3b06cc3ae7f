#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace riemann {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Parameter types that take no part in deduction: the scalar comes from the
// point or problem argument, so Eigen expressions and literals convert.
template <typename Scalar> using VectorArg = std::type_identity_t<Vector<Scalar>>;
template <typename Scalar> using MatrixArg = std::type_identity_t<Matrix<Scalar>>;
template <typename Scalar> using ScalarArg = std::type_identity_t<Scalar>;

enum class ErrorCode {
  InvalidArgument,
  // convergence-order estimation
  TooFewPoints,
  NonDecreasingSequence,
  AllBelowFloor,
  // sphere geometry and Rayleigh quotient
  ZeroTangent,
  NotUnitDirection,
  NotTangent,
  AntipodalPoints,
  SingularMatrix,
  DegeneratePivot,
  SingularShift,
  // SO(n) objectives
  NotAscentDirection,
  DegenerateCommutator,
  IndefiniteOperator,
  // line search and solvers
  NoDecrease,
  MaxEvaluations,
  LineSearchFailed,
  SingularHessian,
  Diverged,
  MaxIterations,
  // harness
  ToleranceBreached,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::TooFewPoints: return "TooFewPoints";
  case ErrorCode::NonDecreasingSequence: return "NonDecreasingSequence";
  case ErrorCode::AllBelowFloor: return "AllBelowFloor";
  case ErrorCode::ZeroTangent: return "ZeroTangent";
  case ErrorCode::NotUnitDirection: return "NotUnitDirection";
  case ErrorCode::NotTangent: return "NotTangent";
  case ErrorCode::AntipodalPoints: return "AntipodalPoints";
  case ErrorCode::SingularMatrix: return "SingularMatrix";
  case ErrorCode::DegeneratePivot: return "DegeneratePivot";
  case ErrorCode::SingularShift: return "SingularShift";
  case ErrorCode::NotAscentDirection: return "NotAscentDirection";
  case ErrorCode::DegenerateCommutator: return "DegenerateCommutator";
  case ErrorCode::IndefiniteOperator: return "IndefiniteOperator";
  case ErrorCode::NoDecrease: return "NoDecrease";
  case ErrorCode::MaxEvaluations: return "MaxEvaluations";
  case ErrorCode::LineSearchFailed: return "LineSearchFailed";
  case ErrorCode::SingularHessian: return "SingularHessian";
  case ErrorCode::Diverged: return "Diverged";
  case ErrorCode::MaxIterations: return "MaxIterations";
  case ErrorCode::ToleranceBreached: return "ToleranceBreached";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Commutator [A, B] = AB - BA.
template <typename DerivedA, typename DerivedB>
auto bracket(const Eigen::MatrixBase<DerivedA> &A,
             const Eigen::MatrixBase<DerivedB> &B) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> AB = A * B;
  AB.noalias() -= B * A;
  return AB;
}

/// Diagonal part of a square matrix, as a matrix.
template <typename Derived>
auto diagonal_part(const Eigen::MatrixBase<Derived> &A) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> D = Matrix<Scalar>::Zero(A.rows(), A.cols());
  D.diagonal() = A.diagonal();
  return D;
}

/// Frobenius norm of the off-diagonal part.
template <typename Derived>
typename Derived::Scalar off_diagonal_norm(const Eigen::MatrixBase<Derived> &A) {
  using Scalar = typename Derived::Scalar;
  Scalar sum(0);
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (i != j)
        sum += A(i, j) * A(i, j);
  return std::sqrt(sum);
}

} // namespace riemann
