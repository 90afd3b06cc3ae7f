#pragma once

#include "riemann/convergence.hpp"
#include "riemann/core.hpp"
#include "riemann/harness/fd_check.hpp"
#include "riemann/harness/trace_io.hpp"
#include "riemann/line_search.hpp"
#include "riemann/rotation.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riemann::harness {

enum class ExperimentId { Fig1, Fig2, Jacobi, FdCheck };
enum class Method { Sd, Cg, Newton, Rqi, NewtonRq };

std::string_view to_string(ExperimentId id);
std::string_view to_string(Method m);
std::string_view to_string(LineSearchKind k);
ExperimentId parse_experiment(std::string_view s);
Method parse_method(std::string_view s);
LineSearchKind parse_line_search(std::string_view s);

/// Uniformly random start, or a start at distance eps from the optimum along
/// a random unit direction.
struct InitMode {
  bool near = false;
  double eps = 0;

  static InitMode random() { return {}; }
  static InitMode near_optimum(double eps) { return {true, eps}; }
  bool operator==(const InitMode &) const = default;
};

std::string to_string(const InitMode &m);
/// "random" or "near:<eps>".
InitMode parse_init(std::string_view s);

/// One experiment run.  Unset optionals take per-experiment defaults (see
/// resolved()).
struct ExperimentSpec {
  ExperimentId experiment = ExperimentId::Fig1;
  std::optional<int> n;
  std::optional<Method> method;
  std::uint64_t seed = 1;
  std::optional<InitMode> init;
  std::optional<std::size_t> max_iterations;
  // stop once the trace's grad_norm column drops below this value
  std::optional<double> tolerance;
  std::optional<std::size_t> reset_period;
  std::optional<LineSearchKind> line_search;
  std::filesystem::path out = ".";

  /// Copy with every default filled in.  Defaults: n = 21 / 10 / 5 for
  /// fig1 / fig2 / jacobi; method sd (newton for jacobi); random start for
  /// fig1 sd/cg, near:0.1 for the other fig1 methods and for sd/cg on SO(n),
  /// near:0.01 for Newton on SO(n); 5000 iterations; tolerance 1e-12; line
  /// search exact / estimate / golden.
  ExperimentSpec resolved() const;

  /// Throws InvalidArgument for inconsistent settings.
  void validate() const;
};

struct RunReport {
  ExperimentSpec spec; // resolved
  std::string status;
  bool converged = false;
  std::size_t iterations = 0;
  double final_objective = 0;
  double final_error = 0;
  std::optional<ConvergenceReport<double>> order;
  std::string order_note; // why no order fit is available
  std::vector<std::pair<std::string, double>> metrics;
  CsvTrace trace;
  std::optional<FdCheckResult> fd;
  bool solver_error = false;
  std::string message;
  double wall_seconds = 0;
};

/// Order fit over the pre-stagnation window of an error sequence.
ConvergenceReport<double> fit_order(const std::vector<double> &errors);

RunReport run_fig1(const ExperimentSpec &spec);
RunReport run_fig2(const ExperimentSpec &spec);
RunReport run_jacobi(const ExperimentSpec &spec);
/// run_jacobi on a given matrix and start.
RunReport run_jacobi_from(const ExperimentSpec &spec, const Matrix<double> &Q,
                          const Rotation<double> &theta0);
RunReport run_fd_check_report(const ExperimentSpec &spec);

/// Dispatches on spec.experiment.  Library errors are caught and recorded as
/// a solver error in the report.
RunReport run_experiment(const ExperimentSpec &spec);

/// Runs seeds spec.seed, spec.seed + 1, ... on up to `jobs` threads.
std::vector<RunReport> run_seeds(const ExperimentSpec &spec, std::size_t count,
                                 std::size_t jobs);

/// key=value lines; everything except the wall-clock time, so the document
/// is reproducible from (spec, seed).
std::string format_report(const RunReport &report);

/// 0 success, 2 tolerance breach, 3 solver error or non-convergence.
int exit_code(const RunReport &report);

/// <out>/<experiment>-<method>-<seed>; fd-check uses the method name "all".
std::filesystem::path output_stem(const ExperimentSpec &spec);

/// Writes <stem>.csv and <stem>.report.txt, creating the directory.
void write_outputs(const RunReport &report);

} // namespace riemann::harness
