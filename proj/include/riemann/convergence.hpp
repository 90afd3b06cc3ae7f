#pragma once

#include "riemann/core.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace riemann {

/// One iteration of a solver run.  `step` is the step length taken from this
/// iterate to the next one (zero on the final record).
template <typename Scalar> struct IterationRecord {
  std::size_t index = 0;
  Scalar value = 0;
  Scalar grad_norm = 0;
  Scalar error = 0;
  Scalar step = 0;

  bool operator==(const IterationRecord &) const = default;
};

template <typename Scalar> class IterationTrace {
public:
  void push(const IterationRecord<Scalar> &record) {
    if (!records_.empty() && record.index <= records_.back().index)
      throw Error(ErrorCode::InvalidArgument,
                  "trace indices must be strictly increasing");
    if (!(record.error >= 0))
      throw Error(ErrorCode::InvalidArgument, "trace error must be >= 0");
    records_.push_back(record);
  }

  /// Sets the step on the most recent record.
  void set_last_step(Scalar step) {
    if (!records_.empty())
      records_.back().step = step;
  }

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const IterationRecord<Scalar> &operator[](std::size_t i) const {
    return records_[i];
  }
  const IterationRecord<Scalar> &back() const { return records_.back(); }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  std::vector<Scalar> errors() const {
    std::vector<Scalar> out;
    out.reserve(records_.size());
    for (const auto &r : records_)
      out.push_back(r.error);
    return out;
  }

  std::vector<Scalar> values() const {
    std::vector<Scalar> out;
    out.reserve(records_.size());
    for (const auto &r : records_)
      out.push_back(r.value);
    return out;
  }

  bool operator==(const IterationTrace &) const = default;

private:
  std::vector<IterationRecord<Scalar>> records_;
};

/// Half-open index range [first, last).
struct IndexWindow {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last > first ? last - first : 0; }
  bool operator==(const IndexWindow &) const = default;
};

/// Fit of log e_{i+1} = log(rate) + order * log e_i.
template <typename Scalar> struct ConvergenceReport {
  Scalar order = 0;
  Scalar rate = 0;
  Scalar residual = 0; // root-mean-square residual of the log-log fit
  IndexWindow window;  // entries actually used
};

template <typename Scalar> constexpr Scalar default_stagnation_floor() {
  return Scalar(100) * std::numeric_limits<Scalar>::epsilon();
}

/// Least-squares estimate of the convergence order and rate of an error
/// sequence over `window`.  Entries at or below `floor` end the window (the
/// round-off plateau is excluded); at least three remaining entries are
/// required and they must be strictly decreasing.
template <typename Scalar>
ConvergenceReport<Scalar>
estimate_order(std::span<const Scalar> errors, IndexWindow window,
               Scalar floor = default_stagnation_floor<Scalar>()) {
  if (window.last > errors.size())
    throw Error(ErrorCode::InvalidArgument, "window exceeds sequence length");
  if (window.size() < 3)
    throw Error(ErrorCode::TooFewPoints, "need at least 3 entries in window");

  std::size_t last = window.first;
  while (last < window.last && errors[last] > floor)
    ++last;
  if (last == window.first)
    throw Error(ErrorCode::AllBelowFloor,
                "every entry in the window is below the stagnation floor");
  if (last - window.first < 3)
    throw Error(ErrorCode::TooFewPoints,
                "fewer than 3 entries above the stagnation floor");
  for (std::size_t i = window.first + 1; i < last; ++i)
    if (!(errors[i] < errors[i - 1]))
      throw Error(ErrorCode::NonDecreasingSequence,
                  "errors must be strictly decreasing");

  const std::size_t m = last - window.first - 1;
  Matrix<Scalar> A(m, 2);
  Vector<Scalar> b(m);
  for (std::size_t k = 0; k < m; ++k) {
    A(k, 0) = Scalar(1);
    A(k, 1) = std::log(errors[window.first + k]);
    b(k) = std::log(errors[window.first + k + 1]);
  }
  const Vector<Scalar> coef = A.colPivHouseholderQr().solve(b);

  ConvergenceReport<Scalar> report;
  report.rate = std::exp(coef(0));
  report.order = coef(1);
  report.residual = std::sqrt((A * coef - b).squaredNorm() / Scalar(m));
  report.window = {window.first, last};
  return report;
}

template <typename Scalar>
ConvergenceReport<Scalar>
estimate_order(const std::vector<Scalar> &errors, IndexWindow window,
               Scalar floor = default_stagnation_floor<Scalar>()) {
  return estimate_order(std::span<const Scalar>(errors), window, floor);
}

/// The longest strictly decreasing run of above-floor entries that ends at
/// the last above-floor entry.  This is the asymptotic regime of a converging
/// run with the round-off plateau and any early non-monotone transient cut
/// off.
template <typename Scalar>
IndexWindow
pre_stagnation_window(std::span<const Scalar> errors,
                      Scalar floor = default_stagnation_floor<Scalar>()) {
  std::size_t end = 0;
  while (end < errors.size() && errors[end] > floor)
    ++end;
  if (end == 0)
    return {0, 0};
  std::size_t begin = end - 1;
  while (begin > 0 && errors[begin - 1] > errors[begin])
    --begin;
  return {begin, end};
}

} // namespace riemann
