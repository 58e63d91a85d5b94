#include "crapper/elliptic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "crapper/error.hpp"

namespace crapper {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double k4Pi = 4.0 * std::numbers::pi;
constexpr double kPointLikePatch = 1e-12;

// cosh(psi) - cos(phi) without cancellation near the pole.
inline double pole_distance(double phi, double psi) {
  const double a = std::sinh(0.5 * psi), b = std::sin(0.5 * phi);
  return 2.0 * (a * a + b * b);
}

void check_rho0(double rho0) {
  if (!(rho0 > 0.0 && rho0 < 1.0)) {
    std::ostringstream os;
    os << "rho0 = " << rho0 << " outside (0,1)";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
}

// (exp(w c) - exp(-w c)) / w, regular at w = 0.
inline double two_sinh_over(double w, double c) {
  const double x = w * c;
  if (std::abs(x) < 1e-8) return 2.0 * c * (1.0 + x * x / 6.0);
  return 2.0 * std::sinh(x) / w;
}

// (exp(-w c) - 1) / w, regular at w = 0.
inline double expm1_over(double w, double c) {
  if (w == 0.0) return -c;
  return std::expm1(-w * c) / w;
}

}  // namespace

double GreensKernel::G(double phi, double psi) const {
  return std::log(2.0 * pole_distance(phi, psi)) / k4Pi;
}

double GreensKernel::d_phi(double phi, double psi) const {
  return std::sin(phi) / (k4Pi * pole_distance(phi, psi));
}

double GreensKernel::d_psi(double phi, double psi) const {
  return std::sinh(psi) / (k4Pi * pole_distance(phi, psi));
}

double GreensKernel::d_psi_psi(double phi, double psi) const {
  const double D = pole_distance(phi, psi);
  const double a = std::sinh(0.5 * psi), b = std::sin(0.5 * phi);
  return (2.0 * b * b - 2.0 * std::cos(phi) * a * a) / (k4Pi * D * D);
}

double GreensKernel::d_phi_psi(double phi, double psi) const {
  const double D = pole_distance(phi, psi);
  return -std::sin(phi) * std::sinh(psi) / (k4Pi * D * D);
}

double GreensKernel::d_phi_phi(double phi, double psi) const { return -d_psi_psi(phi, psi); }

double GreensKernel::cell_integral(double a, double b) const {
  // Quarter-cell antiderivative of log(x^2 + y^2); the regular remainder of
  // G2 vanishes at the pole.
  const double F = a * b * (std::log(a * a + b * b) - 3.0) + a * a * std::atan(b / a) + b * b * std::atan(a / b);
  return 4.0 * F / k4Pi;
}

// ---------------------------------------------------------------- point

double point_W0(const SpectralField& theta_A, double tau_tilde_at_vortex, double omega0, double rho0) {
  check_rho0(rho0);
  const double tau = disk_extension_eval(hilbert(theta_A), rho0, 0.0) + omega0 * tau_tilde_at_vortex;
  return std::exp(omega0 * std::exp(-2.0 * tau) / rho0);
}

PointTildeTau::PointTildeTau(const SpectralField& theta_A, double omega0, double rho0)
    : omega0_(omega0), rho0_(rho0) {
  check_rho0(rho0);
  if (std::abs(omega0) > 0.1) {
    std::ostringstream os;
    os << "|omega0| = " << std::abs(omega0) << " exceeds 0.1";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  psi0_ = std::log(rho0);
  b_ = theta_A.sine_coefficients(theta_A.size() / 2 - 1);

  // tau_A(0, rho0) = -sum b_k rho0^k and the smooth part at the vortex.
  double tauA0 = 0.0, s_at_vortex = 0.0, rk = 1.0;
  for (std::size_t k = 1; k <= b_.size(); ++k) {
    rk *= rho0;
    tauA0 -= b_[k - 1] * rk;
    s_at_vortex += b_[k - 1] * rk * (0.25 - 0.5 * k * psi0_);
  }
  // The vortex value enters its own source through W0; the dipole self term
  // is odd in psi - psi0 and has no regular part.
  double tau0 = tauA0;
  bool converged = false;
  for (int it = 1; it <= 50; ++it) {
    const double c = std::exp(-2.0 * tau0) / rho0;
    const double coef = two_sinh_over(omega0, c);
    const double next = tauA0 + omega0 * coef * s_at_vortex;
    iterations_ = it;
    const double diff = std::abs(next - tau0);
    tau0 = next;
    if (diff <= 1e-15 * (1.0 + std::abs(tau0))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "vortex self-consistency loop did not settle in 50 steps");
  tau0_ = tau0;
  const double c = std::exp(-2.0 * tau0_) / rho0;
  W0_ = std::exp(omega0 * c);
  coef_ = two_sinh_over(omega0, c);
  tilde_at_vortex_ = coef_ * s_at_vortex;
}

double PointTildeTau::smooth_part(double phi, double psi) const {
  double s = 0.0;
  const double e = std::exp(psi);
  double ek = 1.0;
  for (std::size_t k = 1; k <= b_.size(); ++k) {
    ek *= e;
    s += b_[k - 1] * ek * (0.25 - 0.5 * k * psi) * std::cos(k * phi);
  }
  return s;
}

double PointTildeTau::smooth_part_dpsi(double phi, double psi) const {
  double s = 0.0;
  const double e = std::exp(psi);
  double ek = 1.0;
  for (std::size_t k = 1; k <= b_.size(); ++k) {
    ek *= e;
    s += b_[k - 1] * ek * k * (-0.25 - 0.5 * k * psi) * std::cos(k * phi);
  }
  return s;
}

double PointTildeTau::value(double phi, double psi) const {
  return -std::exp(-2.0 * tau0_) * g_.d_psi(phi, psi - psi0_) + coef_ * smooth_part(phi, psi);
}

double PointTildeTau::d_psi(double phi, double psi) const {
  return -std::exp(-2.0 * tau0_) * g_.d_psi_psi(phi, psi - psi0_) + coef_ * smooth_part_dpsi(phi, psi);
}

double PointTildeTau::laplacian_source(double phi, double psi) const {
  // coef * d^2 theta_A / d phi d psi with theta_A = -sum b_k e^{k psi} sin(k phi).
  double s = 0.0;
  const double e = std::exp(psi);
  double ek = 1.0;
  for (std::size_t k = 1; k <= b_.size(); ++k) {
    ek *= e;
    s -= b_[k - 1] * ek * double(k * k) * std::cos(k * phi);
  }
  return coef_ * s;
}

CorrectionFields point_tilde_tau(const SpectralField& theta_A, double omega0, double rho0) {
  PointTildeTau model(theta_A, omega0, rho0);
  const int n = theta_A.size();
  CorrectionFields out;
  std::vector<double> t(n), d(n);
  for (int j = 0; j < n; ++j) {
    const double phi = -grid_point(j, n);
    t[j] = model.value(phi, 0.0);
    d[j] = model.d_psi(phi, 0.0);
  }
  out.tau_tilde = symmetrize(SpectralField(std::move(t)), Parity::Even);
  out.tau_tilde_dpsi = symmetrize(SpectralField(std::move(d)), Parity::Even);
  out.W0 = model.W0();
  out.W_interface = SpectralField::constant(n, model.W0());
  out.W_rate = SpectralField::constant(n, omega0 == 0.0 ? std::exp(-2.0 * model.tau_at_vortex()) / rho0
                                                         : (model.W0() - 1.0) / omega0);
  out.tau_tilde_at_vortex = model.tau_tilde_at_vortex();
  out.tau_at_vortex = model.tau_at_vortex();
  out.iterations = model.iterations();
  out.theta_tilde = point_tilde_theta(out, theta_A, omega0);
  return out;
}

SpectralField point_tilde_theta(const CorrectionFields& fields, const SpectralField& theta_A, double omega0) {
  const int n = theta_A.size();
  const double W0 = fields.W0;
  // (1/W0 - 1)/omega0 with W0 = exp(omega0 c).
  const double c = std::log(W0) / (omega0 == 0.0 ? 1.0 : omega0);
  const double kappa = omega0 == 0.0 ? -fields.W_rate[0] : expm1_over(omega0, c);
  const auto dtheta = derivative(theta_A);
  SpectralField rate(std::vector<double>(n), Parity::Even);
  for (int j = 0; j < n; ++j) rate[j] = -fields.tau_tilde_dpsi[j] / W0 + kappa * dtheta[j];
  rate = symmetrize(rate, Parity::Even);
  // zero in the continuum; on coarse grids a quadrature-sized mean is left over
  const double m = rate.mean();
  if (std::abs(m) > 1e-6 * (1.0 + rate.sup_norm()))
    throw Error(ErrorKind::NonZeroMean, "theta_tilde rate has mean " + std::to_string(m));
  return symmetrize(antiderivative_from(rate + (-m)), Parity::Odd);
}

// ---------------------------------------------------------------- patch

double patch_half_height(double xi) {
  xi = std::clamp(std::abs(xi), 0.0, 1.0);
  if (xi >= 1.0) return 0.0;
  if (xi == 0.0) return kPi / 2;
  // b cot b decreases from 1 to 0 on [0, pi/2].
  double lo = 0.0, hi = kPi / 2;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid < 1e-8 ? 1.0 - mid * mid / 3.0 : mid * std::cos(mid) / std::sin(mid);
    (g > xi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Gauss-Legendre rule on [-1, 1] by the Golub-Welsch eigenvalue method.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    w[i] = 2.0 * v * v;
  }
}

struct PatchGeometry {
  double r = 0, psi_p = 0;
  int n = 0;
  PatchCorrectionOptions opt;
  int nx = 0, ny = 0, nc = 0;
  int P = 0, S = 0;
  double dxi = 0, deta = 0, dcol = 0;
  std::vector<double> phi, psi, area, chi;  // per source cell
  Eigen::MatrixXd Pg, Px, Py;               // patch targets
  Eigen::MatrixXd Tg, Tx, Ty, Dx, Dy;       // interface targets (value, normal derivative)

  int patch_index(int i, int j) const { return i * ny + j; }
  int column_index(int i, int k) const { return P + i * nc + k; }
};

bool same_geometry(const PatchGeometry& g, double r, double psi_p, int n, const PatchCorrectionOptions& o) {
  return g.r == r && g.psi_p == psi_p && g.n == n && g.opt.cells_x == o.cells_x && g.opt.cells_y == o.cells_y &&
         g.opt.column_cells == o.column_cells;
}

std::shared_ptr<const PatchGeometry> build_geometry(double r, double psi_p, int n, const PatchCorrectionOptions& opt) {
  thread_local std::vector<std::shared_ptr<const PatchGeometry>> cache;
  for (const auto& g : cache)
    if (same_geometry(*g, r, psi_p, n, opt)) return g;

  auto geo = std::make_shared<PatchGeometry>();
  PatchGeometry& G = *geo;
  G.r = r;
  G.psi_p = psi_p;
  G.n = n;
  G.opt = opt;
  G.nx = opt.cells_x;
  G.ny = opt.cells_y;
  G.nc = opt.column_cells;
  G.P = G.nx * G.ny;
  G.S = G.P + G.nx * G.nc;
  G.dxi = 2.0 / G.nx;
  G.deta = kPi / G.ny;
  const double top = psi_p + r * kPi / 2;
  G.dcol = -top / G.nc;
  G.phi.resize(G.S);
  G.psi.resize(G.S);
  G.area.resize(G.S);
  G.chi.assign(G.S, 0.0);

  const int sub = 8;
  for (int i = 0; i < G.nx; ++i) {
    const double xi = -1.0 + (i + 0.5) * G.dxi;
    std::vector<double> heights(sub);
    for (int s = 0; s < sub; ++s) heights[s] = patch_half_height(-1.0 + (i + (s + 0.5) / sub) * G.dxi);
    for (int j = 0; j < G.ny; ++j) {
      const double eta = -kPi / 2 + (j + 0.5) * G.deta;
      const int c = G.patch_index(i, j);
      G.phi[c] = r * xi;
      G.psi[c] = psi_p + r * eta;
      G.area[c] = r * r * G.dxi * G.deta;
      double cover = 0.0;
      const double lo = eta - 0.5 * G.deta, hi = eta + 0.5 * G.deta;
      for (double h : heights) cover += std::max(0.0, std::min(hi, h) - std::max(lo, -h));
      G.chi[c] = cover / (sub * G.deta);
    }
    for (int k = 0; k < G.nc; ++k) {
      const int c = G.column_index(i, k);
      G.phi[c] = r * xi;
      G.psi[c] = top + (k + 0.5) * G.dcol;
      G.area[c] = r * G.dxi * G.dcol;
    }
  }

  GreensKernel K;
  G.Pg.resize(G.P, G.S);
  G.Px.resize(G.P, G.S);
  G.Py.resize(G.P, G.S);
  const double self = K.cell_integral(0.5 * r * G.dxi, 0.5 * r * G.deta);
  for (int t = 0; t < G.P; ++t) {
    for (int s = 0; s < G.S; ++s) {
      if (s == t) {
        G.Pg(t, s) = self;
        G.Px(t, s) = 0.0;
        G.Py(t, s) = 0.0;
        continue;
      }
      const double dp = G.phi[t] - G.phi[s], ds = G.psi[t] - G.psi[s];
      G.Pg(t, s) = K.G(dp, ds) * G.area[s];
      G.Px(t, s) = K.d_phi(dp, ds) * G.area[s];
      G.Py(t, s) = K.d_psi(dp, ds) * G.area[s];
    }
  }
  G.Tg.resize(n, G.S);
  G.Tx.resize(n, G.S);
  G.Ty.resize(n, G.S);
  G.Dx.resize(n, G.S);
  G.Dy.resize(n, G.S);
  for (int j = 0; j < n; ++j) {
    const double phi_t = -grid_point(j, n);
    for (int s = 0; s < G.S; ++s) {
      const double dp = phi_t - G.phi[s], ds = -G.psi[s];
      G.Tg(j, s) = K.G(dp, ds) * G.area[s];
      G.Tx(j, s) = K.d_phi(dp, ds) * G.area[s];
      G.Ty(j, s) = K.d_psi(dp, ds) * G.area[s];
      G.Dx(j, s) = K.d_phi_psi(dp, ds) * G.area[s];
      G.Dy(j, s) = K.d_psi_psi(dp, ds) * G.area[s];
    }
  }

  if (cache.size() >= 3) cache.erase(cache.begin());
  cache.push_back(geo);
  return geo;
}

// theta_A and its harmonic conjugate extended into psi < 0.
struct HarmonicData {
  double tau_A, t_phi, t_psi, t_phipsi;
};

HarmonicData harmonic_at(const std::vector<double>& b, double phi, double psi) {
  HarmonicData h{0, 0, 0, 0};
  const double e = std::exp(psi);
  const std::complex<double> rot = std::polar(1.0, phi);
  std::complex<double> w(1.0, 0.0);
  double ek = 1.0;
  for (std::size_t k = 1; k <= b.size(); ++k) {
    ek *= e;
    w *= rot;
    const double c = w.real(), s = w.imag();
    const double bk = b[k - 1] * ek;
    h.tau_A -= bk * c;
    h.t_phi -= bk * k * c;
    h.t_psi -= bk * k * s;
    h.t_phipsi -= bk * double(k * k) * c;
  }
  return h;
}

struct PatchSolution {
  std::shared_ptr<const PatchGeometry> geo;
  Eigen::VectorXd tau;  // on patch cells
  Eigen::VectorXd dG, dX, dY;
  std::vector<double> increments;
  double contraction = 0;
  int iterations = 0;
};

PatchSolution solve_patch(const SpectralField& theta_A, double omega0, double r, double psi_p,
                          const PatchCorrectionOptions& opt) {
  const int n = theta_A.size();
  const double ra = std::abs(r);
  if (psi_p + ra * kPi / 2 >= 0.0 || psi_p - ra * kPi / 2 <= opt.psi_min) {
    std::ostringstream os;
    os << "patch at psi = " << psi_p << " with radius " << ra << " leaves the strip (" << opt.psi_min << ", 0)";
    throw Error(ErrorKind::PatchTouchesBoundary, os.str());
  }
  PatchSolution sol;
  sol.geo = build_geometry(ra, psi_p, n, opt);
  const PatchGeometry& G = *sol.geo;
  const auto b = theta_A.sine_coefficients(n / 2 - 1);

  Eigen::VectorXd chiE = Eigen::VectorXd::Zero(G.S), tphi(G.S), tpsi(G.S), tpp(G.S), I(G.S);
  for (int s = 0; s < G.S; ++s) {
    const auto h = harmonic_at(b, G.phi[s], G.psi[s]);
    if (G.chi[s] > 0) chiE[s] = G.chi[s] * std::exp(-2.0 * h.tau_A);
    tphi[s] = h.t_phi;
    tpsi[s] = h.t_psi;
    tpp[s] = h.t_phipsi;
  }
  const double hpsi = ra * G.deta;
  auto cumulative = [&](const Eigen::VectorXd& f, Eigen::VectorXd& out) {
    for (int i = 0; i < G.nx; ++i) {
      double acc = 0.0;
      for (int j = 0; j < G.ny; ++j) {
        const int c = G.patch_index(i, j);
        out[c] = hpsi * (acc + 0.5 * f[c]);
        acc += f[c];
      }
      for (int k = 0; k < G.nc; ++k) out[G.column_index(i, k)] = hpsi * acc;
    }
  };
  cumulative(chiE, I);

  const Eigen::VectorXd dY0 = -chiE;
  const Eigen::VectorXd dG0 = chiE.cwiseProduct(tphi) + I.cwiseProduct(tpp);
  const Eigen::VectorXd dX0 = -tpsi.cwiseProduct(I);
  const Eigen::VectorXd dY2 = chiE.cwiseProduct(I);
  const Eigen::VectorXd dG2 = -2.0 * chiE.cwiseProduct(I).cwiseProduct(tphi) - I.cwiseProduct(I).cwiseProduct(tpp);

  const Eigen::VectorXd bvec = G.Py * dY0 + G.Pg * dG0 + G.Px * dX0;
  const Eigen::VectorXd a2 = G.Py * dY2 + G.Pg * dG2;

  Eigen::VectorXd tau = bvec;
  Eigen::VectorXd dY1 = Eigen::VectorXd::Zero(G.S), dG1 = Eigen::VectorXd::Zero(G.S),
                  dX1 = Eigen::VectorXd::Zero(G.S), J(G.S), chiEt(G.S);
  auto a1_densities = [&](const Eigen::VectorXd& t) {
    chiEt.setZero();
    chiEt.head(G.P) = chiE.head(G.P).cwiseProduct(t);
    cumulative(chiEt, J);
    dY1 = 2.0 * chiEt;
    dG1 = -2.0 * chiEt.cwiseProduct(tphi) - 2.0 * J.cwiseProduct(tpp);
    dX1 = 2.0 * J.cwiseProduct(tpsi);
  };
  sol.iterations = 1;
  if (omega0 != 0.0) {
    bool converged = false;
    for (int it = 1; it <= opt.max_iter; ++it) {
      a1_densities(tau);
      const Eigen::VectorXd next = bvec + omega0 * (G.Py * dY1 + G.Pg * dG1 + G.Px * dX1 + a2);
      const double inc = (next - tau).cwiseAbs().maxCoeff();
      tau = next;
      sol.iterations = it + 1;
      if (!sol.increments.empty() && sol.increments.back() > 0) {
        const double ratio = inc / sol.increments.back();
        sol.contraction = std::max(sol.contraction, ratio);
        if (ratio >= 1.0 && it >= 3) {
          std::ostringstream os;
          os << "Picard contraction ratio " << ratio;
          throw Error(ErrorKind::NoConvergence, os.str());
        }
      }
      sol.increments.push_back(inc);
      if (inc < opt.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorKind::NoConvergence, "Picard iteration hit the iteration cap");
  }
  a1_densities(tau);
  sol.tau = tau;
  sol.dY = dY0 + omega0 * (dY1 + dY2);
  sol.dG = dG0 + omega0 * (dG1 + dG2);
  sol.dX = dX0 + omega0 * dX1;
  return sol;
}

// Bilinear interpolation of the patch-cell values at scaled coordinates (xi, eta).
double interpolate_cells(const PatchGeometry& G, const Eigen::VectorXd& v, double xi, double eta) {
  const double fx = std::clamp((xi + 1.0) / G.dxi - 0.5, 0.0, G.nx - 1.0);
  const double fy = std::clamp((eta + kPi / 2) / G.deta - 0.5, 0.0, G.ny - 1.0);
  const int i0 = std::min(static_cast<int>(fx), G.nx - 2), j0 = std::min(static_cast<int>(fy), G.ny - 2);
  const double tx = fx - i0, ty = fy - j0;
  return (1 - tx) * (1 - ty) * v[G.patch_index(i0, j0)] + tx * (1 - ty) * v[G.patch_index(i0 + 1, j0)] +
         (1 - tx) * ty * v[G.patch_index(i0, j0 + 1)] + tx * ty * v[G.patch_index(i0 + 1, j0 + 1)];
}

}  // namespace

CorrectionFields patch_tilde_tau(const SpectralField& theta_A, double omega0, double r, double psi_p,
                                 const PatchCorrectionOptions& opt) {
  const int n = theta_A.size();
  CorrectionFields out;
  out.W_interface = SpectralField::constant(n, 1.0);
  out.W_rate = SpectralField::zeros(n, Parity::Even);
  if (r == 0.0) {
    out.tau_tilde = SpectralField::zeros(n, Parity::Even);
    out.tau_tilde_dpsi = SpectralField::zeros(n, Parity::Even);
    out.theta_tilde = SpectralField::zeros(n, Parity::Odd);
    return out;
  }
  const double ra = std::abs(r);
  const auto b = theta_A.sine_coefficients(n / 2 - 1);
  std::vector<double> gx, gw;
  gauss_legendre(opt.chord_points, gx, gw);
  if (ra < kPointLikePatch) {
    // Below this radius the cells are not resolved in double precision; the
    // area terms are O(r^2) and only the chord through W remains.
    if (psi_p >= 0.0 || psi_p <= opt.psi_min)
      throw Error(ErrorKind::PatchTouchesBoundary, "patch centre outside the strip");
    out.tau_tilde = SpectralField::zeros(n, Parity::Even);
    out.tau_tilde_dpsi = SpectralField::zeros(n, Parity::Even);
    out.iterations = 1;
    out.tau_at_vortex = harmonic_at(b, 0.0, psi_p).tau_A;
    for (int j = 0; j < n; ++j) {
      const double phi = -grid_point(j, n);
      if (std::abs(phi) >= ra) continue;
      const double eta_c = patch_half_height(phi / ra);
      out.W_rate[j] = 2.0 * eta_c * ra * std::exp(-2.0 * out.tau_at_vortex);
    }
    out.W_rate = symmetrize(out.W_rate, Parity::Even);
    for (int j = 0; j < n; ++j) out.W_interface[j] = 1.0 + omega0 * out.W_rate[j];
    out.theta_tilde = patch_tilde_theta(out, theta_A, omega0);
    return out;
  }
  const auto sol = solve_patch(theta_A, omega0, r, psi_p, opt);
  const PatchGeometry& G = *sol.geo;
  const Eigen::VectorXd trace = G.Tg * sol.dG + G.Tx * sol.dX + G.Ty * sol.dY;
  const Eigen::VectorXd dpsi = G.Ty * sol.dG + G.Dx * sol.dX + G.Dy * sol.dY;
  out.tau_tilde = symmetrize(SpectralField(std::vector<double>(trace.data(), trace.data() + n)), Parity::Even);
  out.tau_tilde_dpsi = symmetrize(SpectralField(std::vector<double>(dpsi.data(), dpsi.data() + n)), Parity::Even);
  out.iterations = sol.iterations;
  out.increments = sol.increments;
  out.contraction = sol.contraction;
  out.tau_tilde_at_vortex = interpolate_cells(G, sol.tau, 0.0, 0.0);

  // W on the interface: chord integral through the patch below each node.
  out.tau_at_vortex = harmonic_at(b, 0.0, psi_p).tau_A + omega0 * out.tau_tilde_at_vortex;
  for (int j = 0; j < n; ++j) {
    const double phi = -grid_point(j, n);
    const double xi = phi / ra;
    if (std::abs(xi) >= 1.0) continue;
    const double eta_c = patch_half_height(xi);
    double acc = 0.0;
    for (int q = 0; q < opt.chord_points; ++q) {
      const double eta = eta_c * gx[q];
      const double psi = psi_p + ra * eta;
      const double tau = harmonic_at(b, phi, psi).tau_A + omega0 * interpolate_cells(G, sol.tau, xi, eta);
      acc += gw[q] * eta_c * ra * std::exp(-2.0 * tau);
    }
    out.W_rate[j] = acc;
  }
  out.W_rate = symmetrize(out.W_rate, Parity::Even);
  for (int j = 0; j < n; ++j) out.W_interface[j] = 1.0 + omega0 * out.W_rate[j];
  out.theta_tilde = patch_tilde_theta(out, theta_A, omega0);
  return out;
}

SpectralField patch_W(const CorrectionFields& fields) { return fields.W_interface; }

SpectralField patch_tilde_theta(const CorrectionFields& fields, const SpectralField& theta_A, double omega0) {
  const int n = theta_A.size();
  const auto dtheta = derivative(theta_A);
  SpectralField rate(std::vector<double>(n), Parity::Even);
  for (int j = 0; j < n; ++j) {
    // (1/W - 1)/omega0 = -W_rate / W.
    const double W = 1.0 + omega0 * fields.W_rate[j];
    rate[j] = -fields.W_rate[j] / W * dtheta[j] - fields.tau_tilde_dpsi[j];
  }
  rate = symmetrize(rate, Parity::Even);
  const double m = rate.mean();
  return symmetrize(antiderivative_from(rate + (-m)), Parity::Odd);
}

double patch_tilde_tau_at(const SpectralField& theta_A, double omega0, double r, double psi_p, double phi,
                          double psi, const PatchCorrectionOptions& opt) {
  if (std::abs(r) < kPointLikePatch) return 0.0;
  const auto sol = solve_patch(theta_A, omega0, r, psi_p, opt);
  const PatchGeometry& G = *sol.geo;
  GreensKernel K;
  double v = 0.0;
  for (int s = 0; s < G.S; ++s) {
    const double dp = phi - G.phi[s], ds = psi - G.psi[s];
    v += G.area[s] * (K.G(dp, ds) * sol.dG[s] + K.d_phi(dp, ds) * sol.dX[s] + K.d_psi(dp, ds) * sol.dY[s]);
  }
  return v;
}

}  // namespace crapper
