#pragma once

#include <string>
#include <utility>

#include "crapper/curve.hpp"
#include "crapper/spectral.hpp"

namespace crapper {

enum class VortexMode { None, Point, Patch };

const char* to_string(VortexMode m);
VortexMode vortex_mode_from_string(const std::string& s);

// Resolution of the working-coordinate patch grid.
struct PatchGridSpec {
  int cells_x = 16;       // across the patch width
  int cells_y = 24;       // across the patch height
  int column_cells = 24;  // from the patch top up to the surface
  int chord_points = 16;  // Gauss points per chord when integrating W
};

struct WaveParams {
  double A = 0.0;
  double q = 1.0;
  bool q_derived = true;  // q follows A through q_of_A
  double p = 0.0;
  double B = 0.0;
  double omega0 = 0.0;
  double vortex_rho0 = 0.5;
  double patch_radius = 0.0;
  double patch_center_psi = -0.6931471805599453;  // log 0.5
  Point patch_center{0.0, -1.0};                   // physical position of the patch
  VortexMode mode = VortexMode::None;

  int N = 256;
  int patch_nodes = 64;
  PatchGridSpec patch_grid;
  double psi_min = -8.0;
  double vertical_anchor = -1.0;  // z2(+-pi)
  // Grouping of the trailing -1 in the gravity term: p e^{-tau} (I - 1)
  // (default) or p (e^{-tau} I - 1), I the running integral.
  bool gravity_minus_one_inside = true;

  double q_effective() const;
};

double q_of_A(double A);

// Closed-form pair (theta_c odd, tau_c even).
std::pair<SpectralField, SpectralField> crapper_theta_tau(double A, int n);

// Series oracle: theta_c = -4 sum_{k odd} A^k sin(k a)/k, tau_c = 4 sum A^k cos(k a)/k.
double crapper_theta_series(double A, double alpha);
double crapper_tau_series(double A, double alpha);

// Exact interface z = -alpha + 4i/(1 + A e^{i alpha}) + C with z1(0) = 0 and
// z2(+-pi) = anchor.
InterfaceCurve crapper_interface(double A, int n, double anchor = -1.0);

// Even strength solving (sheet operator + I) omega = -2 on the Crapper curve.
SpectralField crapper_sheet_strength(double A, int n, double anchor = -1.0);

// 2 asin(2A / (1 + A^2)).
double crapper_max_angle(double A);

}  // namespace crapper
