#include "crapper/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "crapper/checks.hpp"
#include "crapper/error.hpp"
#include "crapper/geometry.hpp"
#include "crapper/kernels.hpp"
#include "crapper/io.hpp"
#include "crapper/solver.hpp"

namespace crapper {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularJacobian:
    case ErrorKind::InnerNotConverged:
    case ErrorKind::NoBracket:
    case ErrorKind::SingularSystem:
      return kExitNoConvergence;
    default:
      return kExitInvalidInput;
  }
}

int exit_code_for(const std::string& failure) {
  for (auto k : {ErrorKind::NoConvergence, ErrorKind::SingularJacobian, ErrorKind::InnerNotConverged,
                 ErrorKind::NoBracket, ErrorKind::SingularSystem})
    if (failure.rfind(to_string(k), 0) == 0) return kExitNoConvergence;
  return failure.empty() ? kExitOk : kExitInvalidInput;
}

struct Common {
  double A = 0.3;
  int N = 256;
  double anchor = -1.0;
  double psi_min = -8.0;
  bool gravity_outside = false;
};

struct SolveFlags {
  double p = 0.0;
  double omega0 = 0.0;
  double rho0 = 0.5;
  double r0 = 0.05;
  int patch_nodes = 64;
  int steps = 4;
  double inner_tol = 1e-11;
  double outer_tol = 1e-10;
  double cap = 0.05;
  std::string jacobian = "hybrid";
  std::string out;
  std::string plot;
};

void add_common(CLI::App* app, Common& c) {
  // domain checks happen in the library so that they exit as invalid input, not usage
  app->add_option("--A", c.A, "Crapper amplitude parameter, 0 <= A < 1");
  app->add_option("--N", c.N, "grid size (even, at least 8)");
  app->add_option("--anchor", c.anchor, "height of the interface at alpha = +-pi");
  app->add_option("--psi-min", c.psi_min, "lower edge of the patch working domain");
  app->add_flag("--gravity-outside", c.gravity_outside, "group the trailing -1 outside the gravity factor");
}

WaveParams params_of(const Common& c) {
  if (c.N % 2 != 0 || c.N < 8) throw Error(ErrorKind::InvalidInput, "N must be even and at least 8");
  WaveParams P;
  P.A = c.A;
  q_of_A(c.A);  // domain check
  P.N = c.N;
  P.vertical_anchor = c.anchor;
  P.psi_min = c.psi_min;
  P.gravity_minus_one_inside = !c.gravity_outside;
  return P;
}

PlotMarks marks_for(const SolutionState& s, const WaveParams& P) {
  PlotMarks m;
  if (P.mode == VortexMode::Point) m.vortex = Point(0.0, 0.0);
  // drawn at the solved radius even when that radius has collapsed
  if (P.mode == VortexMode::Patch) m.patch = patch_boundary(std::abs(s.r), P.patch_nodes, P.patch_center, P.patch_center_psi);
  return m;
}

void print_rows(std::ostream& out, const std::vector<CheckRow>& rows) {
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-30s %12s  limit %10s  %s\n", r.name.c_str(), sci(r.value).c_str(),
                  sci(r.limit).c_str(), r.pass ? "PASS" : "FAIL");
    out << buf;
  }
}

bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

int cmd_exact(const Common& c, const std::string& out_path, const std::string& plot, std::ostream& out) {
  const auto P = params_of(c);
  const auto s = crapper_state(P);
  // the closed form is resolved to the kinematic tolerance, not the solver one
  const auto stored = make_stored(s, P, 1e-8);
  if (!out_path.empty()) export_solution(s, P, nullptr, out_path, 1e-8);
  const auto curve = reconstruct_interface(s, P);
  if (!plot.empty()) emit_plot(curve, {}, plot);
  out << "A " << P.A << "  q " << P.q_effective() << "  max|theta| " << crapper_max_angle(P.A) << "\n";
  out << "residual F1 " << sci(stored.norms.F1) << "  F2 " << sci(stored.norms.F2) << "\n";
  out << "overhang " << (detect_overhang(curve).overhanging ? "yes" : "no") << "  self-intersection "
      << (detect_self_intersection(curve) ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_solve(const Common& c, const SolveFlags& f, VortexMode mode, std::ostream& out, std::ostream& err) {
  auto P = params_of(c);
  P.mode = mode;
  P.vortex_rho0 = f.rho0;
  if (mode == VortexMode::Patch) {
    P.patch_radius = f.r0;
    P.patch_nodes = f.patch_nodes;
  }
  if (std::abs(f.p) > f.cap || std::abs(f.omega0) > f.cap)
    throw Error(ErrorKind::OutOfRange, "(p, omega0) outside the neighborhood |.| <= " + sci(f.cap));
  if (f.steps < 1) throw Error(ErrorKind::InvalidInput, "--steps must be positive");

  SolverOptions opt;
  opt.inner_tol = f.inner_tol;
  opt.outer_tol = f.outer_tol;
  opt.neighborhood_cap = f.cap;
  if (f.jacobian == "hybrid")
    opt.jacobian = JacobianMode::Hybrid;
  else if (f.jacobian == "fd")
    opt.jacobian = JacobianMode::FiniteDifference;
  else
    throw Error(ErrorKind::InvalidInput, "unknown --jacobian " + f.jacobian);

  const auto run = continuation_sweep(P, linear_path(f.p, f.omega0, f.steps), opt);
  out << "step            p       omega0           B*     residual  outer  inner  overhang  crossing\n";
  for (size_t i = 0; i < run.diagnostics.size(); ++i) {
    const auto& d = run.diagnostics[i];
    char buf[200];
    std::snprintf(buf, sizeof buf, "%4zu %12s %12s %12s %12s %6d %6d %9s %9s", i, sci(d.p).c_str(),
                  sci(d.omega0).c_str(), sci(d.B_star).c_str(), sci(d.residual).c_str(), d.outer_iterations,
                  d.max_inner_iterations, d.overhang ? "yes" : "no", d.self_intersection ? "yes" : "no");
    out << buf;
    if (mode == VortexMode::Patch) out << "  r " << sci(d.r);
    out << "\n";
  }
  if (!run.states.empty()) {
    if (!f.out.empty()) export_solution(run.states.back(), P, &run, f.out, opt.inner_tol);
    if (!f.plot.empty()) {
      auto Q = P;
      Q.p = run.diagnostics.back().p;
      Q.omega0 = run.diagnostics.back().omega0;
      emit_plot(reconstruct_interface(run.states.back(), Q), marks_for(run.states.back(), Q), f.plot);
    }
  }
  if (!run.completed) {
    err << "stopped after " << run.states.size() << " of " << run.path.size() << " steps: " << run.failure << "\n";
    return exit_code_for(run.failure);
  }
  return kExitOk;
}

int cmd_check(const Common& c, const std::string& from, std::ostream& out) {
  std::vector<CheckRow> rows;
  if (!from.empty()) {
    rows = stored_invariants(load_solution(from));
  } else {
    params_of(c);
    rows = crapper_invariants(c.A, c.N);
  }
  print_rows(out, rows);
  return all_pass(rows) ? kExitOk : kExitNoConvergence;
}

int cmd_plot(const Common& c, const std::string& from, const std::string& path) {
  if (!from.empty()) {
    const auto s = load_solution(from);
    const auto st = s.state();
    emit_plot(reconstruct_interface(st, s.params), marks_for(st, s.params), path);
  } else {
    emit_plot(crapper_interface(c.A, params_of(c).N, c.anchor), {}, path);
  }
  return kExitOk;
}

int cmd_export(const std::string& from, const std::string& path) {
  const auto s = load_solution(from);
  write_text(path, curve_csv(s.state(), s.params));
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capillary waves with vorticity: exact profiles, continuation and diagnostics", "crapper"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with option defaults (sections named after subcommands)");

  Common common;
  SolveFlags solve;
  std::string out_path, plot_path, from;

  auto* exact = app.add_subcommand("exact", "write the exact profile for A");
  add_common(exact, common);
  exact->add_option("--out", out_path, "state file (JSON); a CSV curve is written next to it");
  exact->add_option("--plot", plot_path, "SVG drawing");

  auto add_solve = [&](const char* name, const char* help, bool patch) {
    auto* s = app.add_subcommand(name, help);
    add_common(s, common);
    s->add_option("--p", solve.p, "gravity parameter at the end of the path");
    s->add_option("--omega0", solve.omega0, "vortex strength at the end of the path");
    s->add_option("--steps", solve.steps, "continuation steps from (0, 0)");
    s->add_option("--inner-tol", solve.inner_tol, "reduced residual tolerance");
    s->add_option("--outer-tol", solve.outer_tol, "solvability tolerance");
    s->add_option("--cap", solve.cap, "bound on |p| and |omega0|");
    s->add_option("--jacobian", solve.jacobian, "hybrid or fd");
    s->add_option("--out", solve.out, "state file (JSON); a CSV curve is written next to it");
    s->add_option("--plot", solve.plot, "SVG drawing of the final profile");
    if (patch) {
      s->add_option("--r0", solve.r0, "initial patch radius");
      s->add_option("--patch-nodes", solve.patch_nodes, "patch boundary nodes");
    } else {
      s->add_option("--rho0", solve.rho0, "vortex depth in the conformal disk");
    }
    return s;
  };
  auto* point = add_solve("solve-point", "continue from the exact wave with a point vortex", false);
  auto* patch = add_solve("solve-patch", "continue from the exact wave with a vortex patch", true);

  auto* check = app.add_subcommand("check", "evaluate the invariant suite");
  add_common(check, common);
  check->add_option("--from", from, "re-validate a stored state instead");

  auto* plot = app.add_subcommand("plot", "draw a profile");
  add_common(plot, common);
  plot->add_option("--from", from, "stored state to draw (default: exact profile for A)");
  plot->add_option("--out", plot_path, "SVG path")->required();

  auto* exp = app.add_subcommand("export", "write the CSV curve of a stored state");
  exp->add_option("--from", from, "stored state")->required();
  exp->add_option("--out", out_path, "CSV path")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (exact->parsed()) return cmd_exact(common, out_path, plot_path, out);
    if (point->parsed()) return cmd_solve(common, solve, VortexMode::Point, out, err);
    if (patch->parsed()) return cmd_solve(common, solve, VortexMode::Patch, out, err);
    if (check->parsed()) return cmd_check(common, from, out);
    if (plot->parsed()) return cmd_plot(common, from, plot_path);
    if (exp->parsed()) return cmd_export(from, out_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace crapper
