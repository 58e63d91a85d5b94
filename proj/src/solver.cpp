#include "crapper/solver.hpp"

#include <cmath>
#include <sstream>

#include "crapper/error.hpp"
#include "crapper/geometry.hpp"

namespace crapper {

namespace {

struct JacobianCache {
  Eigen::MatrixXd J;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  int n = 0;
  VortexMode mode = VortexMode::None;
  double A = -1.0;
  bool valid = false;
};

thread_local JacobianCache g_cache;

bool cache_matches(const WaveParams& P) {
  return g_cache.valid && g_cache.n == P.N && g_cache.mode == P.mode && g_cache.A == P.A;
}

void refresh(const SolutionState& s, const WaveParams& P, const SolverOptions& opt, const ResidualBundle& R,
             NewtonReport* report) {
  g_cache.J = jacobian(s, P, opt.jacobian, R);
  g_cache.qr.compute(g_cache.J);
  g_cache.n = P.N;
  g_cache.mode = P.mode;
  g_cache.A = P.A;
  g_cache.valid = true;
  const Eigen::MatrixXd Rm = g_cache.qr.matrixQR().triangularView<Eigen::Upper>();
  double big = 0.0, small = INFINITY;
  for (int i = 0; i < std::min(Rm.rows(), Rm.cols()); ++i) {
    big = std::max(big, std::abs(Rm(i, i)));
    small = std::min(small, std::abs(Rm(i, i)));
  }
  const double cond = small > 0 ? big / small : INFINITY;
  if (report) {
    report->condition = cond;
    ++report->jacobians;
  }
  if (!(cond <= opt.max_condition)) {
    g_cache.valid = false;
    std::ostringstream os;
    os << "Jacobian condition estimate " << cond << " at A = " << P.A;
    throw Error(ErrorKind::SingularJacobian, os.str());
  }
}

}  // namespace

SolutionState newton_inner(const WaveParams& params, const SolutionState& initial, double tol, int max_iter) {
  SolverOptions opt;
  opt.inner_tol = tol;
  opt.inner_max_iter = max_iter;
  return newton_inner(params, initial, opt);
}

SolutionState newton_inner(const WaveParams& params, const SolutionState& initial, const SolverOptions& opt,
                           NewtonReport* report) {
  const Layout L = layout_of(params);
  Eigen::VectorXd x = pack(initial, L);
  SolutionState s = unpack(x, L, initial.B);
  ResidualBundle R = residual(s, params);
  double norm = R.norm();
  NewtonReport local;
  NewtonReport& rep = report ? *report : local;
  rep = NewtonReport{};
  rep.residuals.push_back(norm);
  bool fresh = false;
  if (!opt.reuse_jacobian || !cache_matches(params)) {
    if (norm <= opt.inner_tol) return s;
    refresh(s, params, opt, R, &rep);
    fresh = true;
  }
  for (int it = 0; it < opt.inner_max_iter; ++it) {
    if (norm <= opt.inner_tol) return s;
    const Eigen::VectorXd f = residual_vector(R, L);
    const Eigen::VectorXd dx = g_cache.qr.solve(-f);
    double step = 1.0;
    Eigen::VectorXd xn;
    SolutionState sn;
    ResidualBundle Rn;
    double nn = INFINITY;
    for (int h = 0; h <= opt.max_halvings; ++h) {
      xn = x + step * dx;
      sn = unpack(xn, L, s.B);
      try {
        Rn = residual(sn, params);
        nn = Rn.norm();
      } catch (const Error&) {
        nn = INFINITY;
      }
      if (nn < norm) break;
      step *= 0.5;
    }
    rep.iterations = it + 1;
    if (!std::isfinite(nn)) {
      std::ostringstream os;
      os << "residual evaluation failed along the Newton step at iteration " << it + 1;
      throw Error(ErrorKind::NoConvergence, os.str());
    }
    // A stale Jacobian that no longer contracts well is rebuilt and the step retried.
    if (!fresh && (nn > 0.1 * norm)) {
      refresh(s, params, opt, R, &rep);
      fresh = true;
      --it;
      continue;
    }
    x = xn;
    s = sn;
    R = std::move(Rn);
    norm = nn;
    rep.residuals.push_back(norm);
    fresh = false;
    if (!opt.reuse_jacobian && norm > opt.inner_tol) {
      refresh(s, params, opt, R, &rep);
      fresh = true;
    }
  }
  if (norm <= opt.inner_tol) return s;
  std::ostringstream os;
  os << "Newton stopped after " << opt.inner_max_iter << " iterations with residual " << norm;
  throw Error(ErrorKind::NoConvergence, os.str());
}

namespace {

struct Evaluation {
  double f;
  SolutionState state;
  int iterations;
  double residual;
};

Evaluation evaluate(double B, const WaveParams& P, const SolutionState& warm, const SolverOptions& opt) {
  SolutionState s = warm;
  s.B = B;
  NewtonReport rep;
  Evaluation e;
  e.state = newton_inner(P, s, opt, &rep);
  e.iterations = rep.iterations;
  const auto R = residual(e.state, P);
  e.residual = R.norm();
  e.f = R.solvability;
  return e;
}

}  // namespace

BStarResult solve_B_star(double p, double omega0, const WaveParams& params, const SolutionState& warm_start,
                         const SolverOptions& opt) {
  if (std::abs(p) > opt.neighborhood_cap || std::abs(omega0) > opt.neighborhood_cap) {
    std::ostringstream os;
    os << "(p, omega0) = (" << p << ", " << omega0 << ") outside the cap " << opt.neighborhood_cap;
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  WaveParams P = params;
  P.p = p;
  P.omega0 = omega0;
  BStarResult out;
  auto record = [&](double B, const Evaluation& e) {
    out.evaluations.emplace_back(B, e.f);
    out.max_inner_iterations = std::max(out.max_inner_iterations, e.iterations);
  };
  auto finish = [&](double B, const Evaluation& e) {
    out.B = B;
    out.state = e.state;
    out.inner_residual = e.residual;
    return out;
  };

  double B0 = warm_start.B;
  Evaluation e0 = evaluate(B0, P, warm_start, opt);
  record(B0, e0);
  if (std::abs(e0.f) <= opt.outer_tol) return finish(B0, e0);

  // Newton with a finite-difference slope, then secant updates.
  double B1 = B0 + opt.outer_step;
  Evaluation e1 = evaluate(B1, P, e0.state, opt);
  record(B1, e1);
  double slope = (e1.f - e0.f) / (B1 - B0);
  double B = B1;
  Evaluation e = e1;
  for (int it = 0; it < opt.outer_max_iter && std::isfinite(slope) && slope != 0.0; ++it) {
    out.outer_iterations = it + 1;
    if (std::abs(e.f) <= opt.outer_tol) return finish(B, e);
    const double Bn = B - e.f / slope;
    if (std::abs(Bn) > opt.B_cap) break;
    Evaluation en;
    try {
      en = evaluate(Bn, P, e.state, opt);
    } catch (const Error&) {
      break;
    }
    record(Bn, en);
    if (Bn != B) slope = (en.f - e.f) / (Bn - B);
    B = Bn;
    e = std::move(en);
  }
  if (std::abs(e.f) <= opt.outer_tol) return finish(B, e);

  // Fallback: expand a bracket around the warm start, then bisect.
  double lo = B0, hi = B0;
  Evaluation elo = e0, ehi = e0;
  bool bracketed = false;
  for (double d = 1e-3; d <= 2 * opt.B_cap; d *= 2) {
    for (int sgn : {1, -1}) {
      const double Bt = B0 + sgn * d;
      if (std::abs(Bt) > opt.B_cap) continue;
      Evaluation et;
      try {
        et = evaluate(Bt, P, e0.state, opt);
      } catch (const Error&) {
        continue;
      }
      record(Bt, et);
      if ((et.f > 0) != (e0.f > 0)) {
        (sgn > 0 ? hi : lo) = Bt;
        (sgn > 0 ? ehi : elo) = std::move(et);
        bracketed = true;
        break;
      }
    }
    if (bracketed) break;
  }
  if (!bracketed) {
    std::ostringstream os;
    os << "f(B) keeps the sign of " << e0.f << " on |B| <= " << opt.B_cap;
    throw Error(ErrorKind::NoBracket, os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    Evaluation em = evaluate(mid, P, elo.state, opt);
    record(mid, em);
    ++out.outer_iterations;
    if (std::abs(em.f) <= opt.outer_tol) return finish(mid, em);
    if ((em.f > 0) == (elo.f > 0)) {
      lo = mid;
      elo = std::move(em);
    } else {
      hi = mid;
    }
  }
  throw Error(ErrorKind::NoConvergence, "bisection on f(B) did not reach the tolerance");
}

ContinuationRun continuation_sweep(const WaveParams& params, const std::vector<std::pair<double, double>>& path,
                                   const SolverOptions& opt, const SolutionState* start) {
  ContinuationRun run;
  run.params = params;
  run.path = path;
  SolutionState warm = start ? *start : crapper_state(params);
  if (params.mode == VortexMode::Patch && warm.r == 0.0) warm.r = params.patch_radius;
  try {
    for (const auto& [p, w] : path) {
      BStarResult b;
      if (p == 0.0 && w == 0.0 && !start && run.states.empty()) {
        // The Crapper point itself; the patch radius is not an unknown there.
        b.state = crapper_state(params);
        b.inner_residual = residual(b.state, params).norm();
      } else {
        b = solve_B_star(p, w, params, warm, opt);
      }
      WaveParams P = params;
      P.p = p;
      P.omega0 = w;
      P.B = b.B;
      const auto R = residual(b.state, P);
      StepDiagnostics d;
      d.p = p;
      d.omega0 = w;
      d.B_star = b.B;
      d.residual = R.norm();
      d.outer_iterations = b.outer_iterations;
      d.max_inner_iterations = b.max_inner_iterations;
      const auto oh = detect_overhang(R.surface.curve);
      d.overhang = oh.overhanging;
      d.overhang_measure = oh.measure;
      d.self_intersection = detect_self_intersection(R.surface.curve);
      d.r = b.state.r;
      run.states.push_back(b.state);
      run.B_star.push_back(b.B);
      run.diagnostics.push_back(d);
      warm = b.state;
      if (params.mode == VortexMode::Patch && warm.r == 0.0 && p == 0.0 && w == 0.0)
        warm.r = params.patch_radius;
    }
    run.completed = true;
  } catch (const Error& e) {
    run.failure = e.what();
  }
  return run;
}

std::vector<std::pair<double, double>> linear_path(double p, double omega0, int steps) {
  std::vector<std::pair<double, double>> path;
  for (int i = 0; i <= steps; ++i) path.emplace_back(p * i / steps, omega0 * i / steps);
  return path;
}

}  // namespace crapper
