#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crapper/crapper.hpp"
#include "crapper/curve.hpp"
#include "crapper/residual.hpp"
#include "crapper/solver.hpp"

namespace crapper {

inline constexpr int kSchemaVersion = 1;

struct ResidualNorms {
  double F1 = 0.0;  // projected
  double F2 = 0.0;
  double F3 = 0.0;
  double solvability = 0.0;
};

// What a state file holds. The coefficient vectors are the stored data; the
// sampled state is rebuilt from them so that saving a loaded file reproduces
// it byte for byte.
struct StoredSolution {
  WaveParams params;  // p, omega0 and B are those of the stored state
  std::vector<double> theta_sine;    // b_k of sin(k alpha), k = 1..N/2-1
  std::vector<double> omega_cosine;  // a_k of cos(k alpha), k = 0..N/2; a_0 the mean
  double B = 0.0;
  double r = 0.0;
  double tolerance = 1e-11;
  ResidualNorms norms;
  bool converged = true;
  std::string failure;
  std::vector<StepDiagnostics> diagnostics;

  SolutionState state() const;
};

ResidualNorms residual_norms(const ResidualBundle& R);

// Snapshot of a single state at params (p, omega0 and B taken from params/state).
StoredSolution make_stored(const SolutionState& state, const WaveParams& params, double tolerance = 1e-11);
// Final state of a run, with its per-step diagnostics.
StoredSolution make_stored(const ContinuationRun& run, double tolerance = 1e-11);

std::string to_json(const StoredSolution& s);
StoredSolution from_json(const std::string& text);  // VersionError, InvalidInput

void save_solution(const StoredSolution& s, const std::string& path);  // IoError
StoredSolution load_solution(const std::string& path);                 // IoError, VersionError

// Columns alpha,x,y,theta,tau,sheet_strength; N rows plus the closure row at alpha = pi.
std::string curve_csv(const SolutionState& state, const WaveParams& params);
// JSON state at path and the CSV curve next to it (extension replaced by .csv).
void export_solution(const SolutionState& state, const WaveParams& params, const ContinuationRun* run,
                     const std::string& path, double tolerance = 1e-11);

struct PlotMarks {
  std::optional<Point> vortex;          // point vortex position
  std::optional<PatchBoundary> patch;   // patch outline
};

// Self-contained SVG of one period, both neighbouring periods in grey, the
// overhanging stretches (dz1 > 0) highlighted and the vortex or patch drawn once.
std::string plot_svg(const InterfaceCurve& curve, const PlotMarks& marks = {});
void emit_plot(const InterfaceCurve& curve, const PlotMarks& marks, const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace crapper
