#pragma once

#include <Eigen/Dense>

#include <utility>

#include "crapper/crapper.hpp"
#include "crapper/curve.hpp"
#include "crapper/elliptic.hpp"
#include "crapper/spectral.hpp"

namespace crapper {

struct SolutionState {
  SpectralField theta_A;      // odd
  SpectralField omega_sheet;  // even
  double B = 0.0;
  double r = 0.0;  // patch radius; unused in the other modes
};

// (theta_c, omega_c, B = 0, r = 0) on the grid of params.
SolutionState crapper_state(const WaveParams& params);

// Everything derived from a state before the residuals are formed.
struct Surface {
  SpectralField tau;    // H theta_A + omega0 tau_tilde
  SpectralField theta;  // theta_A + omega0 theta_tilde
  SpectralField W;
  InterfaceCurve curve;
  CorrectionFields corrections;
};

Surface surface_of(const SolutionState& state, const WaveParams& params);

struct ResidualBundle {
  SpectralField F1;
  SpectralField F2;
  SpectralField F3;            // patch nodes; empty outside patch mode
  SpectralField projected_F1;  // (I - Pi) F1 with the Nyquist mode removed
  double solvability = 0.0;    // (cos theta_c, F1)
  Surface surface;

  // Largest sup norm among the projected F1, F2 and F3.
  double norm() const;
};

ResidualBundle residual(const SolutionState& state, const WaveParams& params);
ResidualBundle residual_none(const SolutionState& state, const WaveParams& params);
ResidualBundle residual_point(const SolutionState& state, const WaveParams& params);
ResidualBundle residual_patch(const SolutionState& state, const WaveParams& params);

// cosh(H theta_c) H theta1 + q(A) d theta1 / d alpha.
SpectralField gamma_operator(const SpectralField& theta1, double A);
// 2 BR(z, omega1) . dz + omega1.
SpectralField sheet_operator(const SpectralField& omega1, const InterfaceCurve& curve);
// Power-iteration estimate of the spectral radius of omega -> 2 BR(z, omega) . dz,
// from two steps of A^2 so that +-lambda pairs do not oscillate.
double sheet_spectral_radius(const InterfaceCurve& curve, int iterations = 300);
// (Pi f, (I - Pi) f) for the projector onto cos theta_c.
std::pair<SpectralField, SpectralField> lyapunov_projection(const SpectralField& f, double A);

// f(B; p, omega0) = (cos theta_c, F1) at a state solving the projected system.
// Throws InnerNotConverged if the projected residual exceeds 1e-9.
double solvability_functional(double B, double p, double omega0, const SolutionState& inner_state,
                              const WaveParams& params);

// Reduced-space bookkeeping: unknowns are the sine coefficients 1..N/2-1 of
// theta_A, the cosine coefficients 0..N/2 of the sheet strength and, in patch
// mode, r. Rows are the cosine coefficients 0..N/2-1 of the projected F1,
// 0..N/2 of F2, then F3 at the patch nodes. F1 has no Nyquist row: tau = H theta
// carries no Nyquist mode, so nothing in theta_A can move it.
struct Layout {
  int n = 0;
  int theta_count = 0;
  int omega_count = 0;
  bool has_r = false;
  int f1_rows = 0;
  int f3_rows = 0;

  int unknowns() const { return theta_count + omega_count + (has_r ? 1 : 0); }
  int rows() const { return f1_rows + omega_count + f3_rows; }
};

Layout layout_of(const WaveParams& params);
Eigen::VectorXd pack(const SolutionState& state, const Layout& layout);
SolutionState unpack(const Eigen::VectorXd& x, const Layout& layout, double B);
Eigen::VectorXd residual_vector(const ResidualBundle& bundle, const Layout& layout);

enum class JacobianMode { AnalyticAtCrapper, FiniteDifference, Hybrid };

const char* to_string(JacobianMode m);

Eigen::MatrixXd jacobian(const SolutionState& state, const WaveParams& params, JacobianMode mode);
// Jacobian columns for a given residual at state (saves one evaluation).
Eigen::MatrixXd jacobian(const SolutionState& state, const WaveParams& params, JacobianMode mode,
                         const ResidualBundle& at_state);

// Largest over smallest diagonal magnitude of the column-pivoted R factor.
double condition_estimate(const Eigen::MatrixXd& J);

}  // namespace crapper
