#include "riemann/harness/trace_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace riemann::harness {

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  return fields;
}

double parse_double(const std::string &s) {
  if (s.empty())
    throw Error(ErrorCode::InvalidArgument, "empty CSV field");
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  // ERANGE on a subnormal is fine: the parsed value is still exact
  if (end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v)))
    throw Error(ErrorCode::InvalidArgument, "bad number in CSV: " + s);
  return v;
}

std::size_t parse_index(const std::string &s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "bad iteration index in CSV: " + s);
  return static_cast<std::size_t>(std::stoull(s));
}

} // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream &out, const CsvTrace &trace) {
  out << "iter," << trace.value_column << ",grad_norm,error,step\n";
  for (const auto &r : trace.trace)
    out << r.index << ',' << format_double(r.value) << ','
        << format_double(r.grad_norm) << ',' << format_double(r.error) << ','
        << format_double(r.step) << '\n';
}

CsvTrace read_trace_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::InvalidArgument, "missing CSV header");
  const auto header = split(line);
  if (header.size() != 5 || header[0] != "iter" || header[2] != "grad_norm" ||
      header[3] != "error" || header[4] != "step" || header[1].empty())
    throw Error(ErrorCode::InvalidArgument, "unexpected CSV header: " + line);

  CsvTrace out{header[1], {}};
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto f = split(line);
    if (f.size() != 5)
      throw Error(ErrorCode::InvalidArgument, "CSV row needs 5 fields: " + line);
    out.trace.push({parse_index(f[0]), parse_double(f[1]), parse_double(f[2]),
                    parse_double(f[3]), parse_double(f[4])});
  }
  return out;
}

} // namespace riemann::harness
