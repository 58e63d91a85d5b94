#include "crapper/kernels.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "crapper/error.hpp"

namespace crapper {

namespace {

constexpr double kPi = std::numbers::pi;

// cot(pi d / L) for complex d, in a form that stays accurate for small d
// and finite for large |Im d|.
inline Point periodic_cot(Point d, double L) {
  const double u = kPi * d.real() / L;
  const double v = kPi * d.imag() / L;
  if (std::abs(v) > 30.0) return Point(0.0, v > 0 ? -1.0 : 1.0);
  const double s = std::sin(u), c = std::cos(u);
  const double sh = std::sinh(v), ch = std::sqrt(1.0 + sh * sh);
  const double den = sh * sh + s * s;
  return Point(s * c / den, -sh * ch / den);
}

inline double wrapped_distance(Point d, double L) {
  const double shift = L * std::round(d.real() / L);
  return std::abs(d - shift);
}

void check_grid(const InterfaceCurve& curve, const SpectralField& strength) {
  if (curve.size() != strength.size()) {
    std::ostringstream os;
    os << "curve has " << curve.size() << " nodes, strength " << strength.size();
    throw Error(ErrorKind::GridMismatch, os.str());
  }
}

}  // namespace

Eigen::MatrixXcd birkhoff_rott_matrix(const InterfaceCurve& curve) {
  const int n = curve.size();
  const double L = curve.period_shift;
  const double h = 2.0 * kPi / n;
  const Point pref(0.0, h / L);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = (j + 1) % 2; i < n; i += 2) {
      const Point d = curve.z[j] - curve.z[i];
      const int gap = std::abs(i - j);
      if (gap != 1 && gap != n - 1 && wrapped_distance(d, L) < 1e-8) {
        std::ostringstream os;
        os << "nodes " << i << " and " << j << " coincide";
        throw Error(ErrorKind::SelfIntersecting, os.str());
      }
      K(j, i) = pref * periodic_cot(d, L);
    }
  }
  return K;
}

std::vector<Point> birkhoff_rott(const InterfaceCurve& curve, const SpectralField& strength) {
  check_grid(curve, strength);
  const int n = curve.size();
  const auto K = birkhoff_rott_matrix(curve);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = strength[i];
  const Eigen::VectorXcd cv = K * w.cast<Point>();
  std::vector<Point> v(n);
  for (int j = 0; j < n; ++j) v[j] = std::conj(cv[j]);
  return v;
}

Eigen::MatrixXd sheet_tangential_matrix(const InterfaceCurve& curve) {
  const int n = curve.size();
  const auto K = birkhoff_rott_matrix(curve);
  Eigen::MatrixXd A(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) A(j, i) = 2.0 * (curve.dz[j] * K(j, i)).real();
  return A;
}

Eigen::MatrixXcd sheet_velocity_matrix(const InterfaceCurve& curve, const std::vector<Point>& targets) {
  const int n = curve.size();
  const double L = curve.period_shift;
  const double h = 2.0 * kPi / n;
  const Point pref(0.0, h / (2.0 * L));
  Eigen::MatrixXcd K(targets.size(), n);
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (int i = 0; i < n; ++i) K(t, i) = pref * periodic_cot(targets[t] - curve.z[i], L);
  return K;
}

std::vector<Point> sheet_velocity(const InterfaceCurve& curve, const SpectralField& strength,
                                  const std::vector<Point>& targets) {
  check_grid(curve, strength);
  const auto K = sheet_velocity_matrix(curve, targets);
  Eigen::VectorXcd w(curve.size());
  for (int i = 0; i < curve.size(); ++i) w[i] = strength[i];
  const Eigen::VectorXcd cv = K * w;
  std::vector<Point> v(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) v[t] = std::conj(cv[t]);
  return v;
}

std::vector<Point> point_vortex_velocity(const InterfaceCurve& curve, double omega0) {
  std::vector<Point> v(curve.size());
  for (int j = 0; j < curve.size(); ++j) {
    const Point z = curve.z[j];
    const double r2 = std::norm(z);
    if (std::sqrt(r2) <= 1e-8) {
      std::ostringstream os;
      os << "node " << j << " at distance " << std::sqrt(r2) << " from the vortex";
      throw Error(ErrorKind::OriginOnCurve, os.str());
    }
    v[j] = omega0 / (2.0 * kPi) * Point(z.imag(), -z.real()) / r2;
  }
  return v;
}

namespace {

// Middle branch (a cot a, a) for |a| <= pi/2 with the limit at a = 0.
Point middle_branch(double a) {
  if (std::abs(a) < 1e-4) {
    const double a2 = a * a;
    return Point(1.0 - a2 / 3.0 - a2 * a2 / 45.0, a);
  }
  return Point(a * std::cos(a) / std::sin(a), a);
}

Point middle_branch_derivative(double a) {
  if (std::abs(a) < 1e-4) {
    const double a2 = a * a;
    return Point(-2.0 * a / 3.0 - 4.0 * a * a2 / 45.0, 1.0);
  }
  const double s = std::sin(a);
  return Point((std::cos(a) * s - a) / (s * s), 1.0);
}

}  // namespace

Point patch_shape(double alpha) {
  if (alpha < -kPi / 2) return -middle_branch(alpha + kPi);
  if (alpha > kPi / 2) return -middle_branch(alpha - kPi);
  return middle_branch(alpha);
}

Point patch_shape_derivative(double alpha) {
  // The shape has corners at +-pi/2; nodes sitting exactly there take the
  // mean of the one-sided derivatives so the sampled curve keeps its mirror
  // symmetry.
  if (std::abs(std::abs(alpha) - kPi / 2) < 1e-14) {
    const double s = alpha > 0 ? 1.0 : -1.0;
    return 0.5 * (middle_branch_derivative(s * kPi / 2) - middle_branch_derivative(-s * kPi / 2));
  }
  if (alpha < -kPi / 2) return -middle_branch_derivative(alpha + kPi);
  if (alpha > kPi / 2) return -middle_branch_derivative(alpha - kPi);
  return middle_branch_derivative(alpha);
}

PatchBoundary patch_boundary(double r, int n, Point center, double work_center_psi) {
  PatchBoundary p;
  p.alpha = grid(n);
  p.r = r;
  p.center = center;
  p.work_center_psi = work_center_psi;
  p.gamma.resize(n);
  p.dgamma.resize(n);
  for (int j = 0; j < n; ++j) {
    p.gamma[j] = center + r * patch_shape(p.alpha[j]);
    p.dgamma[j] = r * patch_shape_derivative(p.alpha[j]);
  }
  return p;
}

double min_patch_curve_distance(const PatchBoundary& patch, const InterfaceCurve& curve) {
  double m = std::numeric_limits<double>::infinity();
  const double L = curve.period_shift;
  for (const Point& g : patch.gamma)
    for (const Point& z : curve.z) m = std::min(m, wrapped_distance(g - z, L));
  return m;
}

std::vector<Point> patch_velocity_on_curve(const InterfaceCurve& target, const PatchBoundary& patch,
                                           double omega0) {
  const int n = target.size();
  std::vector<Point> v(n, Point(0.0, 0.0));
  if (omega0 == 0.0 || patch.r == 0.0) return v;
  // The log kernel is not periodized, so distance is measured directly.
  double dmin = std::numeric_limits<double>::infinity();
  for (const Point& g : patch.gamma)
    for (const Point& z : target.z) dmin = std::min(dmin, std::abs(g - z));
  if (dmin <= 1e-6) {
    std::ostringstream os;
    os << "patch and curve are " << dmin << " apart";
    throw Error(ErrorKind::CurvesTooClose, os.str());
  }
  const int m = patch.size();
  const double w = omega0 / (2.0 * kPi) * 2.0 * kPi / m;
  for (int j = 0; j < n; ++j) {
    Point acc(0.0, 0.0);
    for (int i = 0; i < m; ++i) acc += std::log(std::abs(target.z[j] - patch.gamma[i])) * patch.dgamma[i];
    v[j] = w * acc;
  }
  return v;
}

SpectralField patch_log_self_term(const PatchBoundary& patch, double omega0) {
  const int m = patch.size();
  if (patch.r == 0.0) throw Error(ErrorKind::DegeneratePatch, "self term needs r != 0");
  const double h = 2.0 * kPi / m;
  std::vector<double> d1(m), d2(m);
  for (int i = 0; i < m; ++i) {
    d1[i] = patch.dgamma[i].real();
    d2[i] = patch.dgamma[i].imag();
  }
  // log|2 sin| part with exact spectral weights, remainder by trapezoid.
  const auto s1 = log_sine_convolution(SpectralField(d1));
  const auto s2 = log_sine_convolution(SpectralField(d2));
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    Point acc(s1[j], s2[j]);
    for (int i = 0; i < m; ++i) {
      double ratio;
      if (i == j) {
        ratio = std::abs(patch.dgamma[j]);
      } else {
        const double da = patch.alpha[j] - patch.alpha[i];
        ratio = std::abs(patch.gamma[j] - patch.gamma[i]) / std::abs(2.0 * std::sin(0.5 * da));
      }
      acc += h * std::log(ratio) * patch.dgamma[i];
    }
    acc *= omega0 / (2.0 * kPi);
    const Point t = patch.dgamma[j];
    out[j] = acc.real() * t.imag() - acc.imag() * t.real();
  }
  return SpectralField(std::move(out));
}

SpectralField patch_self_velocity(const PatchBoundary& patch, const InterfaceCurve& curve,
                                  const SpectralField& strength, double omega0) {
  if (patch.r == 0.0) throw Error(ErrorKind::DegeneratePatch, "patch radius is zero");
  check_grid(curve, strength);
  const double dmin = min_patch_curve_distance(patch, curve);
  if (dmin <= 1e-6) {
    std::ostringstream os;
    os << "patch and curve are " << dmin << " apart";
    throw Error(ErrorKind::CurvesTooClose, os.str());
  }
  const auto u = sheet_velocity(curve, strength, patch.gamma);
  SpectralField out = omega0 == 0.0 ? SpectralField::zeros(patch.size()) : patch_log_self_term(patch, omega0);
  for (int j = 0; j < patch.size(); ++j) {
    const Point t = patch.dgamma[j];
    out[j] += u[j].real() * t.imag() - u[j].imag() * t.real();
  }
  out.set_parity(Parity::None);
  return out;
}

}  // namespace crapper
