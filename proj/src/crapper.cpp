#include "crapper/crapper.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "crapper/error.hpp"
#include "crapper/kernels.hpp"

namespace crapper {

namespace {

constexpr double kPi = std::numbers::pi;

void check_A(double A) {
  if (!(std::abs(A) < 1.0)) {
    std::ostringstream os;
    os << "|A| = " << std::abs(A) << " must be below 1";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
}

}  // namespace

const char* to_string(VortexMode m) {
  switch (m) {
    case VortexMode::None: return "none";
    case VortexMode::Point: return "point";
    case VortexMode::Patch: return "patch";
  }
  return "none";
}

VortexMode vortex_mode_from_string(const std::string& s) {
  if (s == "none") return VortexMode::None;
  if (s == "point") return VortexMode::Point;
  if (s == "patch") return VortexMode::Patch;
  throw Error(ErrorKind::InvalidInput, "unknown mode '" + s + "'");
}

double WaveParams::q_effective() const { return q_derived ? q_of_A(A) : q; }

double q_of_A(double A) {
  check_A(A);
  return (1.0 + A * A) / (1.0 - A * A);
}

std::pair<SpectralField, SpectralField> crapper_theta_tau(double A, int n) {
  check_A(A);
  std::vector<double> th(n), ta(n);
  for (int j = 0; j < n; ++j) {
    const Point zeta = std::polar(1.0, grid_point(j, n));
    const Point w = (1.0 + A * zeta) / (1.0 - A * zeta);
    th[j] = -2.0 * std::arg(w);
    ta[j] = 2.0 * std::log(std::abs(w));
  }
  auto theta = symmetrize(SpectralField(std::move(th), Parity::Odd), Parity::Odd);
  auto tau = symmetrize(SpectralField(std::move(ta), Parity::Even), Parity::Even);
  return {theta, tau};
}

double crapper_theta_series(double A, double alpha) {
  double s = 0.0, ak = A;
  for (int k = 1; std::abs(ak) > 1e-300 && k < 100000; k += 2) {
    const double term = ak * std::sin(k * alpha) / k;
    s += term;
    if (std::abs(ak) / k < 1e-18) break;
    ak *= A * A;
  }
  return -4.0 * s;
}

double crapper_tau_series(double A, double alpha) {
  double s = 0.0, ak = A;
  for (int k = 1; std::abs(ak) > 1e-300 && k < 100000; k += 2) {
    s += ak * std::cos(k * alpha) / k;
    if (std::abs(ak) / k < 1e-18) break;
    ak *= A * A;
  }
  return 4.0 * s;
}

InterfaceCurve crapper_interface(double A, int n, double anchor) {
  check_A(A);
  InterfaceCurve c;
  c.alpha = grid(n);
  c.z.resize(n);
  c.dz.resize(n);
  c.period_shift = -2.0 * kPi;
  const Point I(0.0, 1.0);
  const double shift = anchor - 4.0 / (1.0 - A);
  for (int j = 0; j < n; ++j) {
    const double a = c.alpha[j];
    const Point zeta = std::polar(1.0, a);
    const Point den = 1.0 + A * zeta;
    c.z[j] = -a + 4.0 * I / den + I * shift;
    c.dz[j] = -(1.0 - A * zeta) * (1.0 - A * zeta) / (den * den);
  }
  return c;
}

SpectralField crapper_sheet_strength(double A, int n, double anchor) {
  const auto curve = crapper_interface(A, n, anchor);
  Eigen::MatrixXd M = sheet_tangential_matrix(curve);
  M.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (!(lu.rcond() > 1e-13)) {
    std::ostringstream os;
    os << "reciprocal condition " << lu.rcond();
    throw Error(ErrorKind::SingularSystem, os.str());
  }
  Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Constant(n, -2.0));
  return symmetrize(SpectralField(std::vector<double>(x.data(), x.data() + n), Parity::Even),
                    Parity::Even);
}

double crapper_max_angle(double A) { return 2.0 * std::asin(2.0 * std::abs(A) / (1.0 + A * A)); }

}  // namespace crapper
