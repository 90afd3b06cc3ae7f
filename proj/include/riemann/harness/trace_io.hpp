#pragma once

#include "riemann/convergence.hpp"

#include <iosfwd>
#include <string>

namespace riemann::harness {

/// A trace together with the name of its objective column ("rho" or "f").
struct CsvTrace {
  std::string value_column;
  IterationTrace<double> trace;
};

/// Writes `iter,<value>,grad_norm,error,step` with 17 significant digits, so
/// every double survives a round trip exactly.
void write_trace_csv(std::ostream &out, const CsvTrace &trace);

/// Parses the format written by write_trace_csv.  Throws InvalidArgument on
/// a malformed header or row.
CsvTrace read_trace_csv(std::istream &in);

/// "%.17g" formatting shared by the CSV and report writers.
std::string format_double(double value);

} // namespace riemann::harness
