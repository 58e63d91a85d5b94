#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include "crapper/cli.hpp"
#include "crapper/error.hpp"
#include "crapper/geometry.hpp"
#include "crapper/io.hpp"
#include "crapper/kernels.hpp"

using namespace crapper;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "crapper_test_io";
  fs::create_directories(dir);
  return dir / name;
}

int count(const std::string& text, const std::string& needle) {
  int c = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++c;
  return c;
}

int lines(const std::string& text) { return count(text, "\n"); }

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = run_command(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

WaveParams odd_params() {
  WaveParams P;
  P.A = 0.3;
  P.N = 32;
  P.mode = VortexMode::Point;
  P.p = 1e-4;
  P.omega0 = -2e-4;
  P.vortex_rho0 = 0.45;
  P.patch_radius = 0.03;
  P.patch_center = Point(0.1, -1.2);
  P.patch_nodes = 24;
  P.patch_grid.cells_x = 9;
  P.psi_min = -7.5;
  P.vertical_anchor = -0.75;
  P.gravity_minus_one_inside = false;
  return P;
}

}  // namespace

TEST_CASE("state JSON round-trips byte for byte") {
  const auto P = odd_params();
  auto s = crapper_state(P);
  s.B = 1.0 / 3.0;
  const auto stored = make_stored(s, P);
  const std::string a = to_json(stored);
  const std::string b = to_json(from_json(a));
  CHECK(a == b);
  CHECK(to_json(make_stored(s, P)) == a);  // deterministic

  const auto back = from_json(a);
  CHECK(back.params.A == P.A);
  CHECK(back.params.N == P.N);
  CHECK(back.params.mode == P.mode);
  CHECK(back.params.p == P.p);
  CHECK(back.params.omega0 == P.omega0);
  CHECK(back.params.vortex_rho0 == P.vortex_rho0);
  CHECK(back.params.patch_radius == P.patch_radius);
  CHECK(back.params.patch_center == P.patch_center);
  CHECK(back.params.patch_nodes == P.patch_nodes);
  CHECK(back.params.patch_grid.cells_x == 9);
  CHECK(back.params.psi_min == P.psi_min);
  CHECK(back.params.vertical_anchor == P.vertical_anchor);
  CHECK(back.params.gravity_minus_one_inside == false);
  CHECK(back.B == 1.0 / 3.0);
  CHECK(back.theta_sine == stored.theta_sine);
  CHECK(back.omega_cosine == stored.omega_cosine);
  CHECK(back.omega_cosine.size() == 17u);
  CHECK((back.state().theta_A - s.theta_A).sup_norm() <= 1e-14);
}

TEST_CASE("a converged run survives save and load") {
  WaveParams P;
  P.A = 0.3;
  P.N = 64;
  P.mode = VortexMode::Point;
  const auto run = continuation_sweep(P, linear_path(5e-4, 5e-4, 2));
  REQUIRE(run.completed);
  const auto path = scratch("run.json").string();
  save_solution(make_stored(run), path);
  const auto text = read_text(path);
  const auto loaded = load_solution(path);
  save_solution(loaded, path);
  CHECK(read_text(path) == text);
  CHECK(loaded.diagnostics.size() == 3u);
  CHECK(loaded.converged);
  CHECK(residual(loaded.state(), loaded.params).norm() <= loaded.tolerance);
  CHECK(loaded.params.p == 5e-4);
}

TEST_CASE("unknown schema versions are refused") {
  const auto P = odd_params();
  std::string text = to_json(make_stored(crapper_state(P), P));
  const auto v = std::string("\"schema_version\": ") + std::to_string(kSchemaVersion);
  REQUIRE(text.find(v) != std::string::npos);
  text.replace(text.find(v), v.size(), "\"schema_version\": 99");
  try {
    from_json(text);
    FAIL("expected VersionError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VersionError);
  }
  try {
    from_json("{\"params\": {}}");
    FAIL("expected VersionError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VersionError);
  }
  CHECK_THROWS_AS(from_json("not json"), Error);
  try {
    load_solution(scratch("does_not_exist.json").string());
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
    CHECK(std::string(e.what()).find("does_not_exist.json") != std::string::npos);
  }
}

TEST_CASE("CSV curve has N + 1 rows and a closing row") {
  WaveParams P;
  P.A = 0.3;
  P.N = 32;
  const auto csv = curve_csv(crapper_state(P), P);
  CHECK(csv.rfind("alpha,x,y,theta,tau,sheet_strength\n", 0) == 0);
  CHECK(lines(csv) == 1 + 33);
  std::istringstream in(csv);
  std::string header, first, row, last;
  std::getline(in, header);
  std::getline(in, first);
  while (std::getline(in, row)) last = row;
  double a0, x0, y0, a1, x1, y1;
  std::sscanf(first.c_str(), "%lf,%lf,%lf", &a0, &x0, &y0);
  std::sscanf(last.c_str(), "%lf,%lf,%lf", &a1, &x1, &y1);
  CHECK(a1 - a0 == doctest::Approx(2 * 3.141592653589793));
  CHECK(x1 - x0 == doctest::Approx(-2 * 3.141592653589793));
  CHECK(y1 == y0);
  CHECK(first.substr(first.find(',', first.find(',', first.find(',') + 1) + 1)) ==
        last.substr(last.find(',', last.find(',', last.find(',') + 1) + 1)));
}

TEST_CASE("export writes the state and the curve") {
  WaveParams P;
  P.A = 0.2;
  P.N = 32;
  const auto path = scratch("exported.json");
  export_solution(crapper_state(P), P, nullptr, path.string());
  CHECK(fs::exists(path));
  auto csv = path;
  csv.replace_extension(".csv");
  CHECK(read_text(csv.string()) == curve_csv(load_solution(path.string()).state(), P));
}

TEST_CASE("plots: flat line, overhang, ghosts and markers") {
  const auto flat = plot_svg(crapper_interface(0.0, 32));
  CHECK(count(flat, "<polyline") == 3);
  CHECK(count(flat, "class=\"ghost\"") == 2);
  CHECK(count(flat, "class=\"overhang\"") == 0);
  CHECK(count(flat, "<circle") + count(flat, "<polygon") == 0);
  // every vertex of the flat profile sits at the same height
  std::regex pt("(-?[0-9.]+),(-?[0-9.]+)");
  std::set<std::string> heights;
  const auto body = flat.substr(flat.find("<polyline"));
  for (std::sregex_iterator it(body.begin(), body.end(), pt), end; it != end; ++it) heights.insert((*it)[2]);
  CHECK(heights.size() == 1u);

  const auto steep = plot_svg(crapper_interface(0.45, 128), {Point(0, 0), std::nullopt});
  CHECK(count(steep, "class=\"overhang\"") == 2);  // one run either side of the crest
  CHECK(count(steep, "<circle") == 1);
  CHECK(count(steep, "<polygon") == 0);
  // ghosts are the main period shifted by one period
  const auto ghost_start = steep.find("class=\"ghost\"");
  CHECK(ghost_start < steep.find("class=\"interface\""));

  PlotMarks m;
  m.patch = patch_boundary(0.05, 32);
  const auto with_patch = plot_svg(crapper_interface(0.2, 64), m);
  CHECK(count(with_patch, "<polygon") == 1);
  CHECK(count(with_patch, "<circle") == 0);
  CHECK(plot_svg(crapper_interface(0.2, 64), m) == with_patch);
}

TEST_CASE("command line: exit codes") {
  const auto out = scratch("cli_exact.json").string();
  CHECK(cli({"exact", "--A", "0.3", "--N", "64", "--out", out}) == kExitOk);
  const auto first = read_text(out);
  CHECK(cli({"exact", "--A", "0.3", "--N", "64", "--out", out}) == kExitOk);
  CHECK(read_text(out) == first);

  CHECK(cli({}) == kExitUsage);
  CHECK(cli({"frobnicate"}) == kExitUsage);
  CHECK(cli({"exact", "--bogus"}) == kExitUsage);
  CHECK(cli({"export", "--out", "x.csv"}) == kExitUsage);
  CHECK(cli({"--help"}) == kExitOk);

  CHECK(cli({"exact", "--A", "1.5"}) == kExitInvalidInput);
  CHECK(cli({"exact", "--N", "33"}) == kExitInvalidInput);
  CHECK(cli({"solve-point", "--A", "0.3", "--p", "0.2"}) == kExitInvalidInput);
  CHECK(cli({"check", "--from", scratch("missing.json").string()}) == kExitInvalidInput);

  std::string text;
  CHECK(cli({"solve-point", "--A", "0.3", "--N", "32", "--p", "1e-4", "--steps", "1", "--inner-tol", "1e-30"},
            &text) == kExitNoConvergence);
  CHECK(text.find("NoConvergence") != std::string::npos);
}

TEST_CASE("command line: check, plot and export") {
  std::string text;
  CHECK(cli({"check", "--A", "0.45"}, &text) == kExitOk);
  CHECK(count(text, "PASS") == 8);
  CHECK(count(text, "FAIL") == 0);

  const auto state = scratch("cli_point.json").string();
  CHECK(cli({"solve-point", "--A", "0.3", "--N", "64", "--p", "5e-4", "--omega0", "5e-4", "--steps", "2", "--out",
             state},
            &text) == kExitOk);
  CHECK(cli({"check", "--from", state}, &text) == kExitOk);
  CHECK(count(text, "FAIL") == 0);

  const auto svg = scratch("cli_point.svg").string();
  CHECK(cli({"plot", "--from", state, "--out", svg}) == kExitOk);
  CHECK(count(read_text(svg), "<circle") == 1);

  const auto csv = scratch("cli_point_export.csv").string();
  CHECK(cli({"export", "--from", state, "--out", csv}) == kExitOk);
  CHECK(lines(read_text(csv)) == 1 + 65);
}

TEST_CASE("command line: defaults file") {
  const auto ini = scratch("defaults.ini");
  write_text(ini.string(), "[exact]\nA = 0.25\nN = 32\n");
  std::string text;
  CHECK(cli({"--config", ini.string(), "exact"}, &text) == kExitOk);
  CHECK(text.find("A 0.25") != std::string::npos);
  CHECK(cli({"--config", ini.string(), "exact", "--A", "0.1"}, &text) == kExitOk);
  CHECK(text.find("A 0.1") != std::string::npos);
}
