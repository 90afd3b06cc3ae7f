#include "riemann/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace riemann::harness {

namespace {

[[noreturn]] void invalid(const std::string &what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

bool is_newton_like(Method m) {
  return m == Method::Newton || m == Method::Rqi || m == Method::NewtonRq;
}

} // namespace

std::string_view to_string(ExperimentId id) {
  switch (id) {
  case ExperimentId::Fig1: return "fig1";
  case ExperimentId::Fig2: return "fig2";
  case ExperimentId::Jacobi: return "jacobi";
  case ExperimentId::FdCheck: return "fd-check";
  }
  return "unknown";
}

std::string_view to_string(Method m) {
  switch (m) {
  case Method::Sd: return "sd";
  case Method::Cg: return "cg";
  case Method::Newton: return "newton";
  case Method::Rqi: return "rqi";
  case Method::NewtonRq: return "newton-rq";
  }
  return "unknown";
}

std::string_view to_string(LineSearchKind k) {
  switch (k) {
  case LineSearchKind::Exact: return "exact";
  case LineSearchKind::Golden: return "golden";
  case LineSearchKind::Estimate: return "estimate";
  }
  return "unknown";
}

ExperimentId parse_experiment(std::string_view s) {
  for (auto id : {ExperimentId::Fig1, ExperimentId::Fig2, ExperimentId::Jacobi,
                  ExperimentId::FdCheck})
    if (s == to_string(id))
      return id;
  invalid("unknown experiment: " + std::string(s));
}

Method parse_method(std::string_view s) {
  for (auto m : {Method::Sd, Method::Cg, Method::Newton, Method::Rqi, Method::NewtonRq})
    if (s == to_string(m))
      return m;
  invalid("unknown method: " + std::string(s));
}

LineSearchKind parse_line_search(std::string_view s) {
  for (auto k : {LineSearchKind::Exact, LineSearchKind::Golden, LineSearchKind::Estimate})
    if (s == to_string(k))
      return k;
  invalid("unknown line search: " + std::string(s));
}

std::string to_string(const InitMode &m) {
  return m.near ? "near:" + format_double(m.eps) : "random";
}

InitMode parse_init(std::string_view s) {
  if (s == "random")
    return InitMode::random();
  constexpr std::string_view prefix = "near:";
  if (s.substr(0, prefix.size()) != prefix)
    invalid("init must be 'random' or 'near:<eps>'");
  const std::string num(s.substr(prefix.size()));
  char *end = nullptr;
  const double eps = std::strtod(num.c_str(), &end);
  if (num.empty() || end != num.c_str() + num.size())
    invalid("bad perturbation scale: " + num);
  return InitMode::near_optimum(eps);
}

ExperimentSpec ExperimentSpec::resolved() const {
  ExperimentSpec s = *this;
  const bool sphere = experiment == ExperimentId::Fig1;
  if (!s.n)
    s.n = experiment == ExperimentId::Fig1   ? 21
          : experiment == ExperimentId::Fig2 ? 10
          : experiment == ExperimentId::Jacobi ? 5
                                               : 0;
  if (!s.method)
    s.method = experiment == ExperimentId::Jacobi ? Method::Newton : Method::Sd;
  if (!s.init) {
    if (sphere)
      s.init = is_newton_like(*s.method) ? InitMode::near_optimum(1e-1) : InitMode::random();
    else
      s.init = InitMode::near_optimum(is_newton_like(*s.method) ? 1e-2 : 1e-1);
  }
  if (!s.max_iterations)
    s.max_iterations = 5000;
  if (!s.tolerance)
    s.tolerance = 1e-12;
  if (!s.line_search)
    s.line_search = experiment == ExperimentId::Fig1   ? LineSearchKind::Exact
                    : experiment == ExperimentId::Fig2 ? LineSearchKind::Estimate
                                                       : LineSearchKind::Golden;
  return s;
}

void ExperimentSpec::validate() const {
  const ExperimentSpec s = resolved();
  if (experiment == ExperimentId::FdCheck)
    return;
  if (*s.n < 2)
    invalid("n must be >= 2");
  if (s.init->near && !(s.init->eps > 0))
    invalid("perturbation scale must be > 0");
  if (!(*s.tolerance > 0))
    invalid("tolerance must be > 0");
  if (*s.max_iterations < 1)
    invalid("max iterations must be >= 1");
  if (s.reset_period && *s.reset_period < 1)
    invalid("reset period must be >= 1");
  if (experiment != ExperimentId::Fig1 &&
      (*s.method == Method::Rqi || *s.method == Method::NewtonRq))
    invalid(std::string(to_string(*s.method)) + " applies to fig1 only");
}

ConvergenceReport<double> fit_order(const std::vector<double> &errors) {
  const std::span<const double> view(errors);
  return estimate_order(view, pre_stagnation_window(view));
}

RunReport run_fd_check_report(const ExperimentSpec &spec) {
  RunReport r;
  r.spec = spec.resolved();
  r.fd = run_fd_check(spec.seed);
  r.converged = r.fd->passed();
  r.status = r.converged ? "passed" : "tolerance-breached";
  for (const auto &f : r.fd->families) {
    r.metrics.emplace_back(f.family + ".max_gradient_error", f.max_gradient_error);
    r.metrics.emplace_back(f.family + ".max_hessian_error", f.max_hessian_error);
  }
  r.order_note = "not applicable";
  return r;
}

RunReport run_experiment(const ExperimentSpec &spec) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  try {
    spec.validate();
    switch (spec.experiment) {
    case ExperimentId::Fig1: r = run_fig1(spec); break;
    case ExperimentId::Fig2: r = run_fig2(spec); break;
    case ExperimentId::Jacobi: r = run_jacobi(spec); break;
    case ExperimentId::FdCheck: r = run_fd_check_report(spec); break;
    }
  } catch (const Error &e) {
    r = RunReport{};
    r.spec = spec.resolved();
    r.status = "error";
    r.solver_error = true;
    r.message = e.what();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<RunReport> run_seeds(const ExperimentSpec &spec, std::size_t count,
                                 std::size_t jobs) {
  std::vector<RunReport> reports(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      ExperimentSpec s = spec;
      s.seed = spec.seed + i;
      reports[i] = run_experiment(s);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, count));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  return reports;
}

std::string format_report(const RunReport &r) {
  const ExperimentSpec &s = r.spec;
  std::ostringstream out;
  auto kv = [&](std::string_view key, const auto &value) {
    out << key << '=' << value << '\n';
  };
  kv("experiment", to_string(s.experiment));
  kv("seed", s.seed);
  if (s.experiment != ExperimentId::FdCheck) {
    kv("method", to_string(*s.method));
    kv("n", *s.n);
    kv("init", to_string(*s.init));
    kv("max_iterations", *s.max_iterations);
    kv("tolerance", format_double(*s.tolerance));
    kv("reset_period", s.reset_period ? std::to_string(*s.reset_period) : "default");
    kv("line_search", to_string(*s.line_search));
  }
  kv("status", r.status);
  kv("converged", r.converged ? "true" : "false");
  if (!r.message.empty())
    kv("message", r.message);
  if (r.fd) {
    for (const auto &f : r.fd->families) {
      kv(f.family + ".n", f.n);
      kv(f.family + ".instances", f.instances);
      kv(f.family + ".max_gradient_error", format_double(f.max_gradient_error));
      kv(f.family + ".max_hessian_error", format_double(f.max_hessian_error));
      kv(f.family + ".passed", f.passed() ? "true" : "false");
    }
    kv("gradient_tolerance", format_double(fd_gradient_tolerance));
    kv("hessian_tolerance", format_double(fd_hessian_tolerance));
    return out.str();
  }
  if (r.solver_error && r.trace.trace.empty())
    return out.str();
  kv("iterations", r.iterations);
  kv("final_objective", format_double(r.final_objective));
  kv("final_error", format_double(r.final_error));
  if (r.order) {
    kv("order", format_double(r.order->order));
    kv("rate", format_double(r.order->rate));
    kv("fit_residual", format_double(r.order->residual));
    kv("window_first", r.order->window.first);
    kv("window_last", r.order->window.last);
  } else {
    kv("order", "unavailable");
    kv("order_note", r.order_note);
  }
  for (const auto &[key, value] : r.metrics)
    kv(key, format_double(value));
  return out.str();
}

int exit_code(const RunReport &r) {
  if (r.fd)
    return r.fd->passed() ? 0 : 2;
  if (r.solver_error || !r.converged)
    return 3;
  return 0;
}

std::filesystem::path output_stem(const ExperimentSpec &spec) {
  const ExperimentSpec s = spec.resolved();
  const std::string method =
      s.experiment == ExperimentId::FdCheck ? "all" : std::string(to_string(*s.method));
  return s.out / (std::string(to_string(s.experiment)) + "-" + method + "-" +
                  std::to_string(s.seed));
}

void write_outputs(const RunReport &r) {
  const auto stem = output_stem(r.spec);
  std::filesystem::create_directories(stem.parent_path());
  auto open = [](const std::filesystem::path &p) {
    std::ofstream f(p, std::ios::binary);
    if (!f)
      throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
    return f;
  };
  {
    auto csv = open(stem.string() + ".csv");
    if (r.fd) {
      csv << "family,n,instance,gradient_error,hessian_error\n";
      for (const auto &s : r.fd->samples)
        csv << s.family << ',' << s.n << ',' << s.instance << ','
            << format_double(s.gradient_error) << ',' << format_double(s.hessian_error)
            << '\n';
    } else {
      write_trace_csv(csv, r.trace);
    }
  }
  auto report = open(stem.string() + ".report.txt");
  report << format_report(r);
}

} // namespace riemann::harness
