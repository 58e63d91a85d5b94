#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crapper/residual.hpp"

namespace crapper {

struct SolverOptions {
  double inner_tol = 1e-11;  // sup norm of the reduced residual
  int inner_max_iter = 20;
  int max_halvings = 6;
  double max_condition = 1e12;
  JacobianMode jacobian = JacobianMode::Hybrid;
  // Keep the last Jacobian across solves while Newton contracts fast enough.
  bool reuse_jacobian = true;
  double outer_tol = 1e-10;  // |f(B)|
  int outer_max_iter = 30;
  double outer_step = 1e-5;  // B increment for the first slope estimate
  double B_cap = 0.5;
  double neighborhood_cap = 0.05;  // |p|, |omega0|
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residuals;  // norm before each step and after the last
  double condition = 0.0;
  int jacobians = 0;
};

SolutionState newton_inner(const WaveParams& params, const SolutionState& initial, double tol = 1e-11,
                           int max_iter = 20);
SolutionState newton_inner(const WaveParams& params, const SolutionState& initial, const SolverOptions& opt,
                           NewtonReport* report = nullptr);

struct BStarResult {
  double B = 0.0;
  SolutionState state;
  std::vector<std::pair<double, double>> evaluations;  // (B, f) in order
  int outer_iterations = 0;
  int max_inner_iterations = 0;
  double inner_residual = 0.0;
};

BStarResult solve_B_star(double p, double omega0, const WaveParams& params, const SolutionState& warm_start,
                         const SolverOptions& opt = {});

struct StepDiagnostics {
  double p = 0.0;
  double omega0 = 0.0;
  double B_star = 0.0;
  double residual = 0.0;
  int outer_iterations = 0;
  int max_inner_iterations = 0;
  bool overhang = false;
  double overhang_measure = 0.0;
  bool self_intersection = false;
  double r = 0.0;
};

struct ContinuationRun {
  WaveParams params;
  std::vector<std::pair<double, double>> path;  // as requested; states may stop short
  std::vector<SolutionState> states;
  std::vector<double> B_star;
  std::vector<StepDiagnostics> diagnostics;
  bool completed = false;
  std::string failure;  // first error message when the sweep stopped early
};

// Marches along (p, omega0), warm-starting each step from the last. Starts
// from the Crapper state unless a start state is given. In patch mode a zero
// radius in the start state is replaced by params.patch_radius.
ContinuationRun continuation_sweep(const WaveParams& params, const std::vector<std::pair<double, double>>& path,
                                   const SolverOptions& opt = {}, const SolutionState* start = nullptr);

// Evenly spaced path from (0, 0) to (p, omega0), first point included.
std::vector<std::pair<double, double>> linear_path(double p, double omega0, int steps);

}  // namespace crapper
