#include "riemann/harness/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>

using namespace riemann;
using namespace riemann::harness;

namespace {

struct Options {
  int n = 0;
  std::string method, init, line_search;
  std::uint64_t seed = 1;
  std::size_t max_iter = 0, reset_period = 0, repeat = 1, jobs = 1;
  double tol = 0;
  std::string out = "results";
};

void add_common(CLI::App *cmd, Options &o, bool solver_flags) {
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--repeat", o.repeat, "run seeds seed .. seed+repeat-1")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", o.jobs, "worker threads for repeated runs")
      ->check(CLI::PositiveNumber);
  if (!solver_flags)
    return;
  cmd->add_option("--n", o.n, "problem size")->check(CLI::Range(2, 1000));
  cmd->add_option("--method", o.method, "sd | cg | newton | rqi | newton-rq");
  cmd->add_option("--init", o.init, "random | near:<eps>");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "stop when the gradient norm drops below this")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--reset-period", o.reset_period, "conjugate gradient restart period")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--line-search", o.line_search, "exact | golden | estimate");
}

ExperimentSpec to_spec(ExperimentId id, const Options &o) {
  ExperimentSpec s;
  s.experiment = id;
  s.seed = o.seed;
  s.out = o.out;
  if (o.n)
    s.n = o.n;
  if (!o.method.empty())
    s.method = parse_method(o.method);
  if (!o.init.empty())
    s.init = parse_init(o.init);
  if (o.max_iter)
    s.max_iterations = o.max_iter;
  if (o.tol > 0)
    s.tolerance = o.tol;
  if (o.reset_period)
    s.reset_period = o.reset_period;
  if (!o.line_search.empty())
    s.line_search = parse_line_search(o.line_search);
  return s;
}

void print_summary(const RunReport &r) {
  const auto stem = output_stem(r.spec);
  std::printf("%s: status=%s", stem.filename().string().c_str(), r.status.c_str());
  if (r.fd) {
    for (const auto &f : r.fd->families)
      std::printf(" %s[grad=%.2e hess=%.2e]", f.family.c_str(), f.max_gradient_error,
                  f.max_hessian_error);
  } else if (!r.trace.trace.empty()) {
    std::printf(" iterations=%zu error=%.3e", r.iterations, r.final_error);
    if (r.order)
      std::printf(" order=%.3f rate=%.3e", r.order->order, r.order->rate);
  }
  if (!r.message.empty())
    std::printf(" (%s)", r.message.c_str());
  std::printf(" wall=%.3fs\n", r.wall_seconds);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Riemannian optimization experiments on spheres and rotation groups"};
  app.require_subcommand(1);

  Options o;
  struct Sub {
    const char *name;
    const char *help;
    ExperimentId id;
  };
  const Sub subs[] = {
      {"fig1", "Rayleigh quotient on S^{n-1}, Q = diag(n, ..., 1)", ExperimentId::Fig1},
      {"fig2", "tr(Theta^T Q Theta N) on SO(n)", ExperimentId::Fig2},
      {"jacobi", "diagonalization by tr(H pi(H)) on SO(n)", ExperimentId::Jacobi},
      {"fd-check", "finite-difference checks of gradients and Hessians",
       ExperimentId::FdCheck},
  };
  std::vector<std::pair<CLI::App *, ExperimentId>> commands;
  for (const auto &sub : subs) {
    auto *cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, o, sub.id != ExperimentId::FdCheck);
    commands.emplace_back(cmd, sub.id);
  }
  CLI11_PARSE(app, argc, argv);

  ExperimentSpec spec;
  try {
    for (const auto &[cmd, id] : commands)
      if (cmd->parsed())
        spec = to_spec(id, o);
    spec.validate();
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  int code = 0;
  for (const auto &report : run_seeds(spec, o.repeat, o.jobs)) {
    try {
      write_outputs(report);
    } catch (const Error &e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    print_summary(report);
    code = std::max(code, exit_code(report));
  }
  return code;
}
