#pragma once

#include <vector>

#include "crapper/curve.hpp"
#include "crapper/spectral.hpp"

namespace crapper {

// Periodic free-space Green function of the Laplacian in (phi, psi),
// G2 = (1/4pi) log(2 (cosh psi - cos phi)), and its derivatives.
struct GreensKernel {
  double psi_min = -8.0;

  double G(double phi, double psi) const;
  double d_phi(double phi, double psi) const;
  double d_psi(double phi, double psi) const;
  double d_psi_psi(double phi, double psi) const;
  double d_phi_psi(double phi, double psi) const;
  double d_phi_phi(double phi, double psi) const;
  // Integral of G over the rectangle [-a, a] x [-b, b] centred on the pole.
  double cell_integral(double a, double b) const;
};

struct CorrectionFields {
  SpectralField tau_tilde;       // even, trace on the interface
  SpectralField tau_tilde_dpsi;  // even, normal derivative of tau_tilde on the interface
  SpectralField theta_tilde;     // odd
  SpectralField W_interface;     // even
  // (W - 1)/omega0 on the interface; kept separately so omega0 -> 0 is regular.
  SpectralField W_rate;
  double W0 = 1.0;
  double tau_tilde_at_vortex = 0.0;
  double tau_at_vortex = 0.0;
  int iterations = 0;
  std::vector<double> increments;  // Picard increments, sup norm
  double contraction = 0.0;        // largest ratio of successive increments
};

// ---- point vortex ----

double point_W0(const SpectralField& theta_A, double tau_tilde_at_vortex, double omega0, double rho0);

// Interior evaluator of tau_tilde for the point vortex. phi = -alpha, psi = log rho.
class PointTildeTau {
 public:
  PointTildeTau(const SpectralField& theta_A, double omega0, double rho0);

  double value(double phi, double psi) const;
  double d_psi(double phi, double psi) const;
  // Source of the Poisson problem satisfied away from the vortex.
  double laplacian_source(double phi, double psi) const;

  double W0() const { return W0_; }
  double tau_at_vortex() const { return tau0_; }
  double tau_tilde_at_vortex() const { return tilde_at_vortex_; }
  double smooth_coefficient() const { return coef_; }
  int iterations() const { return iterations_; }

 private:
  double smooth_part(double phi, double psi) const;
  double smooth_part_dpsi(double phi, double psi) const;

  std::vector<double> b_;  // sine coefficients of theta_A
  double omega0_, rho0_, psi0_;
  double tau0_ = 0, W0_ = 1, coef_ = 0, tilde_at_vortex_ = 0;
  int iterations_ = 0;
  GreensKernel g_;
};

// tau_tilde trace, its normal derivative, W0 and the vortex value.
CorrectionFields point_tilde_tau(const SpectralField& theta_A, double omega0, double rho0);

// Integrates d theta_tilde / d alpha = -(1/W0) d_psi tau_tilde + ((1/W0 - 1)/omega0) d theta_A / d alpha.
SpectralField point_tilde_theta(const CorrectionFields& fields, const SpectralField& theta_A, double omega0);

// ---- vortex patch ----

// Half-height eta(xi) of the unit patch shape at horizontal position xi in [0, 1].
double patch_half_height(double xi);

struct PatchCorrectionOptions {
  int cells_x = 16;
  int cells_y = 24;
  int column_cells = 24;
  int chord_points = 16;
  double tol = 1e-11;
  int max_iter = 100;
  double psi_min = -8.0;
};

// Working-coordinate patch at (0, psi_p) with radius |r|; Picard iteration
// for tau_tilde, then traces and W on the interface.
CorrectionFields patch_tilde_tau(const SpectralField& theta_A, double omega0, double r, double psi_p,
                                 const PatchCorrectionOptions& opt = {});

// W(alpha, 1) from a correction already computed by patch_tilde_tau.
SpectralField patch_W(const CorrectionFields& fields);

// Integrates omega0 d theta_tilde/d phi = (1/W - 1) d theta_A/d phi + omega0 d tau_tilde/d psi along
// the interface; the O(omega0 r^2) mean of the integrand is removed first.
SpectralField patch_tilde_theta(const CorrectionFields& fields, const SpectralField& theta_A, double omega0);

// Interior value of the converged patch tau_tilde at a point away from the patch.
double patch_tilde_tau_at(const SpectralField& theta_A, double omega0, double r, double psi_p, double phi,
                          double psi, const PatchCorrectionOptions& opt = {});

}  // namespace crapper
