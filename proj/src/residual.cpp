#include "crapper/residual.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "crapper/error.hpp"
#include "crapper/geometry.hpp"
#include "crapper/kernels.hpp"

namespace crapper {

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField cos_theta_c(double A, int n) {
  const auto theta_c = crapper_theta_tau(A, n).first;
  return map(theta_c, [](double t) { return std::cos(t); }, Parity::Even);
}

PatchCorrectionOptions patch_options(const WaveParams& P) {
  PatchCorrectionOptions o;
  o.cells_x = P.patch_grid.cells_x;
  o.cells_y = P.patch_grid.cells_y;
  o.column_cells = P.patch_grid.column_cells;
  o.chord_points = P.patch_grid.chord_points;
  o.psi_min = P.psi_min;
  return o;
}

CorrectionFields no_correction(int n) {
  CorrectionFields c;
  c.tau_tilde = SpectralField::zeros(n, Parity::Even);
  c.tau_tilde_dpsi = SpectralField::zeros(n, Parity::Even);
  c.theta_tilde = SpectralField::zeros(n, Parity::Odd);
  c.W_interface = SpectralField::constant(n, 1.0);
  c.W_rate = SpectralField::zeros(n, Parity::Even);
  return c;
}

void check_state(const SolutionState& s, const WaveParams& P) {
  if (s.theta_A.size() != P.N || s.omega_sheet.size() != P.N) {
    std::ostringstream os;
    os << "state on " << s.theta_A.size() << "/" << s.omega_sheet.size() << " points, params expect " << P.N;
    throw Error(ErrorKind::GridMismatch, os.str());
  }
}

// Bernoulli operator shared by all modes.
SpectralField bernoulli(const Surface& s, double B, const WaveParams& P) {
  const int n = s.tau.size();
  const double q = P.q_effective();
  std::vector<double> e(n), integrand(n);
  for (int j = 0; j < n; ++j) {
    e[j] = std::exp(-s.tau[j]);
    integrand[j] = e[j] * std::sin(s.theta[j]) / s.W[j];
  }
  const auto I = antiderivative_from(symmetrize(SpectralField(integrand), Parity::Odd));
  const auto dtheta = derivative(s.theta);
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) {
    const double gravity = P.gravity_minus_one_inside ? e[j] * (I[j] - 1.0) : e[j] * I[j] - 1.0;
    f[j] = std::sinh(s.tau[j]) - P.p * gravity + q * s.W[j] * dtheta[j] - B * e[j];
  }
  return symmetrize(SpectralField(std::move(f)), Parity::Even);
}

// W (2 BR . dz + omega + 2 v_vortex . dz) + 2.
SpectralField tangential(const Surface& s, const SpectralField& omega, const std::vector<Point>& v_vortex) {
  const int n = omega.size();
  const Eigen::MatrixXd T = sheet_tangential_matrix(s.curve);
  const Eigen::Map<const Eigen::VectorXd> w(omega.samples().data(), n);
  const Eigen::VectorXd t = T * w;
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) {
    const double vort = v_vortex.empty() ? 0.0 : 2.0 * (std::conj(v_vortex[j]) * s.curve.dz[j]).real();
    f[j] = s.W[j] * (t[j] + omega[j] + vort) + 2.0;
  }
  return symmetrize(SpectralField(std::move(f)), Parity::Even);
}

void finish(ResidualBundle& R, const WaveParams& P) {
  const auto f = filter_nyquist(R.F1);
  R.projected_F1 = lyapunov_projection(f, P.A).second;
  R.solvability = inner_product(cos_theta_c(P.A, P.N), f);
}

PatchBoundary patch_of(const SolutionState& s, const WaveParams& P) {
  return patch_boundary(s.r, P.patch_nodes, P.patch_center, P.patch_center_psi);
}

// Radius below which F3 is replaced by its first-order form.
constexpr double kSmallPatch = 1e-8;

// U(c) . (d gamma~)^perp at the patch nodes, U the sheet velocity at the centre.
SpectralField centre_normal_velocity(const InterfaceCurve& curve, const SpectralField& omega, const WaveParams& P) {
  const auto unit = patch_boundary(1.0, P.patch_nodes, P.patch_center, P.patch_center_psi);
  const Point U = sheet_velocity(curve, omega, {P.patch_center})[0];
  std::vector<double> out(P.patch_nodes);
  for (int j = 0; j < P.patch_nodes; ++j) {
    const Point t = unit.dgamma[j];
    out[j] = U.real() * t.imag() - U.imag() * t.real();
  }
  return SpectralField(std::move(out));
}

}  // namespace

SolutionState crapper_state(const WaveParams& params) {
  SolutionState s;
  s.theta_A = crapper_theta_tau(params.A, params.N).first;
  s.omega_sheet = crapper_sheet_strength(params.A, params.N, params.vertical_anchor);
  return s;
}

Surface surface_of(const SolutionState& state, const WaveParams& params) {
  check_state(state, params);
  const int n = params.N;
  Surface s;
  const double w0 = params.omega0;
  switch (params.mode) {
    case VortexMode::None:
      s.corrections = no_correction(n);
      break;
    case VortexMode::Point:
      s.corrections = point_tilde_tau(state.theta_A, w0, params.vortex_rho0);
      break;
    case VortexMode::Patch:
      if (std::abs(w0) > 0.05) {
        std::ostringstream os;
        os << "|omega0| = " << std::abs(w0) << " exceeds 0.05 for the patch";
        throw Error(ErrorKind::OutOfRange, os.str());
      }
      s.corrections = patch_tilde_tau(state.theta_A, w0, state.r, params.patch_center_psi, patch_options(params));
      break;
  }
  s.tau = symmetrize(hilbert(state.theta_A) + w0 * s.corrections.tau_tilde, Parity::Even);
  s.theta = symmetrize(state.theta_A + w0 * s.corrections.theta_tilde, Parity::Odd);
  s.W = s.corrections.W_interface;
  s.curve = integrate_interface(s.tau, s.theta, s.W, params.vertical_anchor);
  return s;
}

double ResidualBundle::norm() const {
  double m = std::max(projected_F1.sup_norm(), F2.sup_norm());
  if (F3.size() > 0) m = std::max(m, F3.sup_norm());
  return m;
}

ResidualBundle residual_none(const SolutionState& state, const WaveParams& params) {
  ResidualBundle R;
  R.surface = surface_of(state, params);
  R.F1 = bernoulli(R.surface, state.B, params);
  R.F2 = tangential(R.surface, state.omega_sheet, {});
  finish(R, params);
  return R;
}

ResidualBundle residual_point(const SolutionState& state, const WaveParams& params) {
  ResidualBundle R;
  R.surface = surface_of(state, params);
  R.F1 = bernoulli(R.surface, state.B, params);
  R.F2 = tangential(R.surface, state.omega_sheet, point_vortex_velocity(R.surface.curve, params.omega0));
  finish(R, params);
  return R;
}

ResidualBundle residual_patch(const SolutionState& state, const WaveParams& params) {
  ResidualBundle R;
  R.surface = surface_of(state, params);
  R.F1 = bernoulli(R.surface, state.B, params);
  if (state.r == 0.0) {
    R.F2 = tangential(R.surface, state.omega_sheet, {});
    // every term of F3 carries a factor of r
    R.F3 = SpectralField::zeros(params.patch_nodes);
  } else if (std::abs(state.r) < kSmallPatch) {
    // Leading order in r: the sheet velocity at the centre against r times the
    // unit-shape normal; the self term and the patch velocity are O(r^2).
    R.F2 = tangential(R.surface, state.omega_sheet, {});
    R.F3 = state.r * centre_normal_velocity(R.surface.curve, state.omega_sheet, params);
  } else {
    const auto patch = patch_of(state, params);
    R.F2 = tangential(R.surface, state.omega_sheet,
                      patch_velocity_on_curve(R.surface.curve, patch, params.omega0));
    R.F3 = patch_self_velocity(patch, R.surface.curve, state.omega_sheet, params.omega0);
  }
  finish(R, params);
  return R;
}

ResidualBundle residual(const SolutionState& state, const WaveParams& params) {
  switch (params.mode) {
    case VortexMode::Point:
      return residual_point(state, params);
    case VortexMode::Patch:
      return residual_patch(state, params);
    case VortexMode::None:
      break;
  }
  return residual_none(state, params);
}

SpectralField gamma_operator(const SpectralField& theta1, double A) {
  const auto [theta_c, tau_c] = crapper_theta_tau(A, theta1.size());
  (void)theta_c;
  const double q = q_of_A(A);
  const auto h = hilbert(theta1);
  const auto d = derivative(theta1);
  std::vector<double> out(theta1.size());
  for (int j = 0; j < theta1.size(); ++j) out[j] = std::cosh(tau_c[j]) * h[j] + q * d[j];
  return SpectralField(std::move(out), product_parity(theta1.parity(), Parity::Odd));
}

SpectralField sheet_operator(const SpectralField& omega1, const InterfaceCurve& curve) {
  if (omega1.size() != curve.size()) throw Error(ErrorKind::GridMismatch, "strength and curve on different grids");
  const int n = omega1.size();
  const Eigen::MatrixXd T = sheet_tangential_matrix(curve);
  const Eigen::Map<const Eigen::VectorXd> w(omega1.samples().data(), n);
  const Eigen::VectorXd t = T * w + w;
  return SpectralField(std::vector<double>(t.data(), t.data() + n), omega1.parity());
}

double sheet_spectral_radius(const InterfaceCurve& curve, int iterations) {
  const Eigen::MatrixXd T = sheet_tangential_matrix(curve);
  const int n = curve.size();
  // deterministic start with every mode present
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v[j] = 1.0 + std::cos(0.7 * j) + 0.3 * std::sin(1.3 * j * j);
  v.normalize();
  double rho = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd w = T * (T * v);
    const double g = w.norm();
    if (g == 0.0) return 0.0;
    rho = std::sqrt(g);
    v = w / g;
  }
  return rho;
}

std::pair<SpectralField, SpectralField> lyapunov_projection(const SpectralField& f, double A) {
  const auto c = cos_theta_c(A, f.size());
  const double coef = inner_product(c, f) / inner_product(c, c);
  SpectralField pf = coef * c;
  SpectralField rest = f - pf;
  pf.set_parity(f.parity());
  rest.set_parity(f.parity());
  return {pf, rest};
}

double solvability_functional(double B, double p, double omega0, const SolutionState& inner_state,
                              const WaveParams& params) {
  WaveParams P = params;
  P.p = p;
  P.omega0 = omega0;
  SolutionState s = inner_state;
  s.B = B;
  const auto R = residual(s, P);
  if (R.norm() > 1e-9) {
    std::ostringstream os;
    os << "projected residual " << R.norm() << " at B = " << B;
    throw Error(ErrorKind::InnerNotConverged, os.str());
  }
  return R.solvability;
}

// ---------------------------------------------------------------- reduced space

Layout layout_of(const WaveParams& params) {
  Layout L;
  L.n = params.N;
  L.theta_count = params.N / 2 - 1;
  L.omega_count = params.N / 2 + 1;
  L.f1_rows = params.N / 2;
  L.has_r = params.mode == VortexMode::Patch;
  L.f3_rows = L.has_r ? params.patch_nodes : 0;
  return L;
}

Eigen::VectorXd pack(const SolutionState& state, const Layout& L) {
  Eigen::VectorXd x(L.unknowns());
  const auto b = state.theta_A.sine_coefficients(L.theta_count);
  const auto a = state.omega_sheet.cosine_coefficients(L.omega_count);
  for (int k = 0; k < L.theta_count; ++k) x[k] = b[k];
  for (int k = 0; k < L.omega_count; ++k) x[L.theta_count + k] = a[k];
  if (L.has_r) x[L.theta_count + L.omega_count] = state.r;
  return x;
}

SolutionState unpack(const Eigen::VectorXd& x, const Layout& L, double B) {
  SolutionState s;
  s.theta_A = SpectralField::from_sine(L.n, std::vector<double>(x.data(), x.data() + L.theta_count));
  s.omega_sheet = SpectralField::from_cosine(
      L.n, std::vector<double>(x.data() + L.theta_count, x.data() + L.theta_count + L.omega_count));
  s.B = B;
  if (L.has_r) s.r = x[L.theta_count + L.omega_count];
  return s;
}

Eigen::VectorXd residual_vector(const ResidualBundle& R, const Layout& L) {
  Eigen::VectorXd v(L.rows());
  const auto a = R.projected_F1.cosine_coefficients(L.f1_rows);
  const auto c = R.F2.cosine_coefficients(L.omega_count);
  for (int k = 0; k < L.f1_rows; ++k) v[k] = a[k];
  for (int k = 0; k < L.omega_count; ++k) v[L.f1_rows + k] = c[k];
  for (int j = 0; j < L.f3_rows; ++j) v[L.f1_rows + L.omega_count + j] = R.F3[j];
  return v;
}

const char* to_string(JacobianMode m) {
  switch (m) {
    case JacobianMode::AnalyticAtCrapper:
      return "analytic_at_crapper";
    case JacobianMode::FiniteDifference:
      return "finite_difference";
    case JacobianMode::Hybrid:
      return "hybrid";
  }
  return "?";
}

namespace {

// Samples -> cosine coefficients 0..m-1.
Eigen::MatrixXd cosine_analysis(int n, int m) {
  Eigen::MatrixXd C(m, n);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < n; ++j) C(k, j) = (k == 0 || 2 * k == n ? 1.0 : 2.0) / n * std::cos(k * grid_point(j, n));
  return C;
}

// Cosine basis 0..m-1 -> samples.
Eigen::MatrixXd cosine_synthesis(int n, int m) {
  Eigen::MatrixXd S(n, m);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < m; ++k) S(j, k) = std::cos(k * grid_point(j, n));
  return S;
}

// Exact columns of the residual with respect to the sheet coefficients. The
// curve does not depend on the sheet strength, so these rows are linear.
void sheet_columns(Eigen::MatrixXd& J, const SolutionState& state, const WaveParams& P, const Layout& L,
                   const Surface& s) {
  const int n = L.n, m = L.omega_count, f3 = L.f1_rows + m;
  Eigen::MatrixXd T = sheet_tangential_matrix(s.curve);
  T.diagonal().array() += 1.0;
  for (int j = 0; j < n; ++j) T.row(j) *= s.W[j];
  const Eigen::MatrixXd S = cosine_synthesis(n, m);
  J.block(0, L.theta_count, L.f1_rows, m).setZero();
  J.block(L.f1_rows, L.theta_count, m, m) = cosine_analysis(n, m) * T * S;
  if (L.has_r) {
    if (std::abs(state.r) < kSmallPatch) {
      const auto unit = patch_boundary(1.0, P.patch_nodes, P.patch_center, P.patch_center_psi);
      const Eigen::MatrixXcd K = sheet_velocity_matrix(s.curve, {P.patch_center});
      Eigen::MatrixXd M(L.f3_rows, n);
      for (int j = 0; j < L.f3_rows; ++j)
        for (int i = 0; i < n; ++i) M(j, i) = state.r * (K(0, i) * unit.dgamma[j]).imag();
      J.block(f3, L.theta_count, L.f3_rows, m) = M * S;
    } else {
      const auto patch = patch_of(state, P);
      const Eigen::MatrixXcd K = sheet_velocity_matrix(s.curve, patch.gamma);
      Eigen::MatrixXd M(L.f3_rows, n);
      for (int j = 0; j < L.f3_rows; ++j)
        for (int i = 0; i < n; ++i) M(j, i) = (K(j, i) * patch.dgamma[j]).imag();
      J.block(f3, L.theta_count, L.f3_rows, m) = M * S;
    }
  }
}

void difference_column(Eigen::MatrixXd& J, int col, const Eigen::VectorXd& x, const WaveParams& P, const Layout& L,
                       double B, bool central, const Eigen::VectorXd& f0) {
  Eigen::VectorXd xp = x;
  if (central) {
    const double h = 1e-6 * (1.0 + std::abs(x[col]));
    xp[col] = x[col] + h;
    const auto fp = residual_vector(residual(unpack(xp, L, B), P), L);
    xp[col] = x[col] - h;
    const auto fm = residual_vector(residual(unpack(xp, L, B), P), L);
    J.col(col) = (fp - fm) / (2.0 * h);
  } else {
    const double h = 1e-7 * (1.0 + std::abs(x[col]));
    xp[col] = x[col] + h;
    const auto fp = residual_vector(residual(unpack(xp, L, B), P), L);
    J.col(col) = (fp - f0) / h;
  }
}

}  // namespace

Eigen::MatrixXd jacobian(const SolutionState& state, const WaveParams& params, JacobianMode mode) {
  return jacobian(state, params, mode, residual(state, params));
}

Eigen::MatrixXd jacobian(const SolutionState& state, const WaveParams& params, JacobianMode mode,
                         const ResidualBundle& at_state) {
  const Layout L = layout_of(params);
  const int m = L.f1_rows;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(L.rows(), L.unknowns());
  const Eigen::VectorXd x = pack(state, L);
  const int r_col = L.theta_count + L.omega_count;

  switch (mode) {
    case JacobianMode::FiniteDifference:
      for (int c = 0; c < L.unknowns(); ++c) difference_column(J, c, x, params, L, state.B, true, {});
      break;
    case JacobianMode::Hybrid: {
      // one-sided differences need the base point in exactly the packed representation
      const Eigen::VectorXd base = residual_vector(residual(unpack(x, L, state.B), params), L);
      for (int c = 0; c < L.theta_count; ++c) difference_column(J, c, x, params, L, state.B, false, base);
      if (L.has_r) difference_column(J, r_col, x, params, L, state.B, false, base);
      sheet_columns(J, state, params, L, at_state.surface);
      break;
    }
    case JacobianMode::AnalyticAtCrapper: {
      if (params.p != 0.0 || params.omega0 != 0.0 || state.B != 0.0 || state.r != 0.0)
        throw Error(ErrorKind::InvalidInput, "analytic Jacobian is only available at the Crapper point");
      // Gamma block, projected like the F1 rows
      const int n = L.n;
      for (int k = 1; k <= L.theta_count; ++k) {
        const auto e = SpectralField::from_function(n, [k](double a) { return std::sin(k * a); }, Parity::Odd);
        const auto g = lyapunov_projection(filter_nyquist(gamma_operator(e, params.A)), params.A).second;
        const auto a = g.cosine_coefficients(m);
        for (int i = 0; i < m; ++i) J(i, k - 1) = a[i];
      }
      // lower-left blocks by central differences, F1 rows excluded
      for (int c = 0; c < L.theta_count; ++c) {
        Eigen::MatrixXd col = Eigen::MatrixXd::Zero(L.rows(), L.unknowns());
        difference_column(col, c, x, params, L, state.B, true, {});
        J.block(m, c, L.rows() - m, 1) = col.block(m, c, L.rows() - m, 1);
      }
      sheet_columns(J, state, params, L, at_state.surface);
      if (L.has_r) {
        // r -> F3: the sheet velocity at the patch centre against the unit shape normal
        const auto g = centre_normal_velocity(at_state.surface.curve, state.omega_sheet, params);
        for (int j = 0; j < L.f3_rows; ++j) J(m + L.omega_count + j, r_col) = g[j];
      }
      break;
    }
  }
  return J;
}

double condition_estimate(const Eigen::MatrixXd& J) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  const int k = std::min(R.rows(), R.cols());
  double big = 0.0, small = INFINITY;
  for (int i = 0; i < k; ++i) {
    big = std::max(big, std::abs(R(i, i)));
    small = std::min(small, std::abs(R(i, i)));
  }
  return small > 0 ? big / small : INFINITY;
}

}  // namespace crapper
