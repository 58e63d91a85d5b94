#include "crapper/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "crapper/error.hpp"
#include "crapper/residual.hpp"

namespace crapper {

namespace {

constexpr double kPi = std::numbers::pi;

// Orientation of c relative to the directed segment a -> b.
double orient(Point a, Point b, Point c) {
  const Point u = b - a, v = c - a;
  return u.real() * v.imag() - u.imag() * v.real();
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double segment_distance(Point a, Point b, Point c, Point d) {
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d), point_segment_distance(c, a, b),
                   point_segment_distance(d, a, b)});
}

}  // namespace

InterfaceCurve integrate_interface(const SpectralField& tau, const SpectralField& theta, const SpectralField& W,
                                   double anchor) {
  const int n = tau.size();
  if (theta.size() != n || W.size() != n) throw Error(ErrorKind::GridMismatch, "tau, theta and W on different grids");
  std::vector<double> g1(n), g2(n);
  for (int j = 0; j < n; ++j) {
    const double e = std::exp(-tau[j]) / W[j];
    g1[j] = e * std::cos(theta[j]);
    g2[j] = e * std::sin(theta[j]);
  }
  SpectralField f1(std::move(g1), Parity::Even), f2(std::move(g2), Parity::Odd);
  f1 = symmetrize(f1, Parity::Even);
  f2 = symmetrize(f2, Parity::Odd);
  const double drift = f1.mean();
  const auto G1 = antiderivative_from(f1 + (-drift));
  const auto G2 = antiderivative_from(f2 + (-f2.mean()));

  InterfaceCurve c;
  c.alpha = grid(n);
  c.z.resize(n);
  c.dz.resize(n);
  c.period_shift = -2.0 * kPi * drift;
  for (int j = 0; j < n; ++j) {
    // G1 is odd, so z1(0) = 0 once the drift is taken as -drift * alpha
    const double x = -drift * c.alpha[j] - G1[j];
    const double y = anchor - G2[j];
    c.z[j] = Point(x, y);
    c.dz[j] = -Point(f1[j], f2[j]);
  }
  return c;
}

InterfaceCurve reconstruct_interface(const SolutionState& state, const WaveParams& params) {
  return surface_of(state, params).curve;
}

OverhangInfo detect_overhang(const InterfaceCurve& curve) {
  OverhangInfo info;
  for (const auto& d : curve.dz) info.measure = std::max(info.measure, d.real());
  // the Crapper family has dz1 < 0 everywhere below the threshold
  info.overhanging = info.measure > 1e-12;
  return info;
}

IntersectionInfo find_self_intersections(const InterfaceCurve& curve) {
  IntersectionInfo info;
  const int n = curve.size();
  if (n < 4) return info;
  const double L = curve.period_shift;
  auto node = [&](int j) { return j < n ? curve.z[j] : curve.z[j - n] + L; };
  for (int i = 0; i < n; ++i) {
    const Point a = node(i), b = node(i + 1);
    for (int j = i + 1; j < n; ++j) {
      for (int s = -1; s <= 1; ++s) {
        if (s == 0 && j - i <= 1) continue;
        if (s == -1 && i == 0 && j == n - 1) continue;  // closure pair: shared endpoint z0
        const Point c = node(j) + double(s) * L, d = node(j + 1) + double(s) * L;
        const double o1 = orient(a, b, c), o2 = orient(a, b, d);
        const double o3 = orient(c, d, a), o4 = orient(c, d, b);
        if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
          info.crossing = true;
          ++info.crossings;
        } else if (segment_distance(a, b, c, d) < 1e-10) {
          info.near_touch = true;
        }
      }
    }
  }
  return info;
}

bool detect_self_intersection(const InterfaceCurve& curve) { return find_self_intersections(curve).crossing; }

SpectralField curvature(const InterfaceCurve& curve) {
  const int n = curve.size();
  std::vector<double> x1(n), y1(n);
  double smallest = INFINITY;
  for (int j = 0; j < n; ++j) {
    x1[j] = curve.dz[j].real();
    y1[j] = curve.dz[j].imag();
    smallest = std::min(smallest, std::abs(curve.dz[j]));
  }
  if (!(smallest > 1e-12)) {
    std::ostringstream os;
    os << "|dz| = " << smallest << " on the curve";
    throw Error(ErrorKind::DegenerateParametrization, os.str());
  }
  const SpectralField fx(x1), fy(y1);
  const auto x2 = derivative(fx), y2 = derivative(fy);
  std::vector<double> k(n);
  for (int j = 0; j < n; ++j) {
    const double s = std::abs(curve.dz[j]);
    k[j] = (x1[j] * y2[j] - y1[j] * x2[j]) / (s * s * s);
  }
  return SpectralField(std::move(k));
}

}  // namespace crapper
