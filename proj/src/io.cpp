#include "crapper/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "crapper/error.hpp"
#include "crapper/geometry.hpp"

namespace crapper {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Short fixed format for drawing coordinates; keeps the SVG small and stable.
std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  std::string s = buf;
  return s == "-0.00000" ? "0.00000" : s;
}

json params_json(const WaveParams& P) {
  return json{
      {"A", P.A},
      {"q", P.q_effective()},
      {"q_derived", P.q_derived},
      {"p", P.p},
      {"B", P.B},
      {"omega0", P.omega0},
      {"vortex_rho0", P.vortex_rho0},
      {"patch_radius", P.patch_radius},
      {"patch_center_psi", P.patch_center_psi},
      {"patch_center", {P.patch_center.real(), P.patch_center.imag()}},
      {"mode", to_string(P.mode)},
      {"N", P.N},
      {"patch_nodes", P.patch_nodes},
      {"patch_grid",
       {{"cells_x", P.patch_grid.cells_x},
        {"cells_y", P.patch_grid.cells_y},
        {"column_cells", P.patch_grid.column_cells},
        {"chord_points", P.patch_grid.chord_points}}},
      {"psi_min", P.psi_min},
      {"vertical_anchor", P.vertical_anchor},
      {"gravity_minus_one_inside", P.gravity_minus_one_inside},
  };
}

WaveParams params_from(const json& j) {
  WaveParams P;
  P.A = j.at("A").get<double>();
  P.q = j.at("q").get<double>();
  P.q_derived = j.at("q_derived").get<bool>();
  P.p = j.at("p").get<double>();
  P.B = j.at("B").get<double>();
  P.omega0 = j.at("omega0").get<double>();
  P.vortex_rho0 = j.at("vortex_rho0").get<double>();
  P.patch_radius = j.at("patch_radius").get<double>();
  P.patch_center_psi = j.at("patch_center_psi").get<double>();
  const auto& c = j.at("patch_center");
  P.patch_center = Point(c.at(0).get<double>(), c.at(1).get<double>());
  P.mode = vortex_mode_from_string(j.at("mode").get<std::string>());
  P.N = j.at("N").get<int>();
  P.patch_nodes = j.at("patch_nodes").get<int>();
  const auto& g = j.at("patch_grid");
  P.patch_grid.cells_x = g.at("cells_x").get<int>();
  P.patch_grid.cells_y = g.at("cells_y").get<int>();
  P.patch_grid.column_cells = g.at("column_cells").get<int>();
  P.patch_grid.chord_points = g.at("chord_points").get<int>();
  P.psi_min = j.at("psi_min").get<double>();
  P.vertical_anchor = j.at("vertical_anchor").get<double>();
  P.gravity_minus_one_inside = j.at("gravity_minus_one_inside").get<bool>();
  return P;
}

json diagnostics_json(const StepDiagnostics& d) {
  return json{{"p", d.p},
              {"omega0", d.omega0},
              {"B_star", d.B_star},
              {"residual", d.residual},
              {"outer_iterations", d.outer_iterations},
              {"max_inner_iterations", d.max_inner_iterations},
              {"overhang", d.overhang},
              {"overhang_measure", d.overhang_measure},
              {"self_intersection", d.self_intersection},
              {"r", d.r}};
}

StepDiagnostics diagnostics_from(const json& j) {
  StepDiagnostics d;
  d.p = j.at("p").get<double>();
  d.omega0 = j.at("omega0").get<double>();
  d.B_star = j.at("B_star").get<double>();
  d.residual = j.at("residual").get<double>();
  d.outer_iterations = j.at("outer_iterations").get<int>();
  d.max_inner_iterations = j.at("max_inner_iterations").get<int>();
  d.overhang = j.at("overhang").get<bool>();
  d.overhang_measure = j.at("overhang_measure").get<double>();
  d.self_intersection = j.at("self_intersection").get<bool>();
  d.r = j.at("r").get<double>();
  return d;
}

}  // namespace

SolutionState StoredSolution::state() const {
  SolutionState s;
  s.theta_A = SpectralField::from_sine(params.N, theta_sine);
  s.omega_sheet = SpectralField::from_cosine(params.N, omega_cosine);
  s.B = B;
  s.r = r;
  return s;
}

ResidualNorms residual_norms(const ResidualBundle& R) {
  ResidualNorms n;
  n.F1 = R.projected_F1.sup_norm();
  n.F2 = R.F2.sup_norm();
  n.F3 = R.F3.size() > 0 ? R.F3.sup_norm() : 0.0;
  n.solvability = R.solvability;
  return n;
}

StoredSolution make_stored(const SolutionState& state, const WaveParams& params, double tolerance) {
  StoredSolution s;
  s.params = params;
  s.params.B = state.B;
  const int half = params.N / 2;
  s.theta_sine = state.theta_A.sine_coefficients(half - 1);
  s.omega_cosine = state.omega_sheet.cosine_coefficients(half + 1);
  s.B = state.B;
  s.r = params.mode == VortexMode::Patch ? state.r : 0.0;
  s.tolerance = tolerance;
  // norms of the stored (truncated) representation, which is what a reload sees
  s.norms = residual_norms(residual(s.state(), s.params));
  s.converged = s.norms.F1 <= tolerance && s.norms.F2 <= tolerance && s.norms.F3 <= tolerance;
  return s;
}

StoredSolution make_stored(const ContinuationRun& run, double tolerance) {
  if (run.states.empty()) throw Error(ErrorKind::InvalidInput, "continuation run holds no state");
  WaveParams P = run.params;
  P.p = run.diagnostics.back().p;
  P.omega0 = run.diagnostics.back().omega0;
  auto s = make_stored(run.states.back(), P, tolerance);
  s.converged = s.converged && run.completed;
  s.failure = run.failure;
  s.diagnostics = run.diagnostics;
  return s;
}

std::string to_json(const StoredSolution& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = params_json(s.params);
  j["theta_A_sine"] = s.theta_sine;
  j["omega_sheet_cosine"] = s.omega_cosine;
  j["B"] = s.B;
  j["r"] = s.r;
  j["tolerance"] = s.tolerance;
  j["residual_norms"] = {
      {"F1", s.norms.F1}, {"F2", s.norms.F2}, {"F3", s.norms.F3}, {"solvability", s.norms.solvability}};
  j["converged"] = s.converged;
  j["failure"] = s.failure;
  j["diagnostics"] = json::array();
  for (const auto& d : s.diagnostics) j["diagnostics"].push_back(diagnostics_json(d));
  return j.dump(2) + "\n";
}

StoredSolution from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed state file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw Error(ErrorKind::VersionError, "missing schema_version");
  const int v = j["schema_version"].get<int>();
  if (v != kSchemaVersion)
    throw Error(ErrorKind::VersionError,
                "schema version " + std::to_string(v) + ", expected " + std::to_string(kSchemaVersion));
  try {
    StoredSolution s;
    s.params = params_from(j.at("params"));
    s.theta_sine = j.at("theta_A_sine").get<std::vector<double>>();
    s.omega_cosine = j.at("omega_sheet_cosine").get<std::vector<double>>();
    s.B = j.at("B").get<double>();
    s.r = j.at("r").get<double>();
    s.tolerance = j.at("tolerance").get<double>();
    const auto& n = j.at("residual_norms");
    s.norms = {n.at("F1").get<double>(), n.at("F2").get<double>(), n.at("F3").get<double>(),
               n.at("solvability").get<double>()};
    s.converged = j.at("converged").get<bool>();
    s.failure = j.at("failure").get<std::string>();
    for (const auto& d : j.at("diagnostics")) s.diagnostics.push_back(diagnostics_from(d));
    const int half = s.params.N / 2;
    if (static_cast<int>(s.theta_sine.size()) != half - 1 || static_cast<int>(s.omega_cosine.size()) != half + 1)
      throw Error(ErrorKind::GridMismatch, "coefficient counts do not match N = " + std::to_string(s.params.N));
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("state file: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_solution(const StoredSolution& s, const std::string& path) { write_text(path, to_json(s)); }

StoredSolution load_solution(const std::string& path) {
  try {
    return from_json(read_text(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string curve_csv(const SolutionState& state, const WaveParams& params) {
  const auto S = surface_of(state, params);
  const auto& c = S.curve;
  const int n = c.size();
  std::string out = "alpha,x,y,theta,tau,sheet_strength\n";
  auto row = [&](double a, Point z, int j) {
    out += num(a) + ',' + num(z.real()) + ',' + num(z.imag()) + ',' + num(S.theta[j]) + ',' + num(S.tau[j]) + ',' +
           num(state.omega_sheet[j]) + '\n';
  };
  for (int j = 0; j < n; ++j) row(c.alpha[j], c.z[j], j);
  row(c.alpha[0] + 2.0 * std::numbers::pi, c.z[0] + c.period_shift, 0);
  return out;
}

void export_solution(const SolutionState& state, const WaveParams& params, const ContinuationRun* run,
                     const std::string& path, double tolerance) {
  StoredSolution s = run ? make_stored(*run, tolerance) : make_stored(state, params, tolerance);
  save_solution(s, path);
  std::string csv_path = path;
  const auto dot = csv_path.find_last_of('.');
  const auto slash = csv_path.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) csv_path.erase(dot);
  write_text(csv_path + ".csv", curve_csv(s.state(), s.params));
}

std::string plot_svg(const InterfaceCurve& curve, const PlotMarks& marks) {
  const int n = curve.size();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "curve needs at least two nodes");
  const Point L(curve.period_shift, 0.0);
  std::vector<Point> period(curve.z);
  period.push_back(curve.z[0] + L);

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](Point p) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  };
  for (int s = -1; s <= 1; ++s)
    for (const auto& p : period) grow(p + double(s) * L);
  if (marks.vortex) grow(*marks.vortex);
  if (marks.patch)
    for (const auto& g : marks.patch->gamma) grow(g);
  const double pad = 0.05 * std::max(xmax - xmin, 1.0);
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;

  // y up in the drawing
  auto pt = [&](Point p) { return coord(p.real()) + ',' + coord(-p.imag()); };
  auto polyline = [&](const std::vector<Point>& pts, Point shift, const std::string& cls) {
    std::string s = "<polyline class=\"" + cls + "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + pt(pts[i] + shift);
    return s + "\"/>\n";
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + coord(xmin) + ' ' + coord(-ymax) + ' ' +
         coord(xmax - xmin) + ' ' + coord(ymax - ymin) + "\" width=\"900\" height=\"" +
         std::to_string(static_cast<int>(std::lround(900.0 * (ymax - ymin) / (xmax - xmin)))) + "\">\n";
  out +=
      "<style>polyline{fill:none;stroke-width:0.02}.interface{stroke:#1f4e8c}.ghost{stroke:#9aa5b1}"
      ".overhang{stroke:#d1495b;stroke-width:0.05}.patch{fill:#edae49;stroke:#8a5a00;stroke-width:0.01}"
      ".vortex{fill:#8a5a00}</style>\n";
  out += polyline(period, -L, "ghost");
  out += polyline(period, L, "ghost");
  out += polyline(period, 0.0, "interface");
  // contiguous runs of segments moving against the mean direction
  std::vector<Point> run;
  for (int j = 0; j <= n; ++j) {
    const bool over = j < n && curve.dz[j].real() > 1e-12;
    if (over) {
      if (run.empty() && j > 0) run.push_back(period[j - 1]);
      run.push_back(period[j]);
    } else if (!run.empty()) {
      run.push_back(period[j]);
      out += polyline(run, 0.0, "overhang");
      run.clear();
    }
  }
  if (marks.patch) {
    out += "<polygon class=\"patch\" points=\"";
    for (size_t i = 0; i < marks.patch->gamma.size(); ++i) out += (i ? " " : "") + pt(marks.patch->gamma[i]);
    out += "\"/>\n";
  } else if (marks.vortex) {
    out += "<circle class=\"vortex\" cx=\"" + coord(marks.vortex->real()) + "\" cy=\"" + coord(-marks.vortex->imag()) +
           "\" r=\"0.06\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void emit_plot(const InterfaceCurve& curve, const PlotMarks& marks, const std::string& path) {
  write_text(path, plot_svg(curve, marks));
}

}  // namespace crapper
