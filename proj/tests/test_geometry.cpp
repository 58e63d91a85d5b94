#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crapper/crapper.hpp"
#include "crapper/error.hpp"
#include "crapper/geometry.hpp"
#include "crapper/residual.hpp"

using namespace crapper;
using std::numbers::pi;

namespace {

// Closed curve z(alpha) sampled with exact derivative.
template <class Z, class DZ>
InterfaceCurve closed_curve(int n, Z z, DZ dz) {
  InterfaceCurve c;
  c.alpha = grid(n);
  c.period_shift = 0.0;
  for (double a : c.alpha) {
    c.z.push_back(z(a));
    c.dz.push_back(dz(a));
  }
  return c;
}

double max_distance(const InterfaceCurve& a, const InterfaceCurve& b) {
  double d = 0.0;
  for (int j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a.z[j] - b.z[j]));
  return d;
}

WaveParams point_params(double A, double omega0, int n) {
  WaveParams P;
  P.A = A;
  P.omega0 = omega0;
  P.mode = VortexMode::Point;
  P.N = n;
  return P;
}

}  // namespace

TEST_CASE("reconstruction reproduces the exact Crapper interface") {
  for (double A : {0.0, 0.2, 0.35, 0.44}) {
    WaveParams P;
    P.A = A;
    P.N = 256;
    const auto rec = reconstruct_interface(crapper_state(P), P);
    const auto exact = crapper_interface(A, 256);
    CAPTURE(A);
    CHECK(max_distance(rec, exact) <= 1e-10);
    CHECK(rec.period_shift == doctest::Approx(-2 * pi).epsilon(1e-12));
  }
}

TEST_CASE("flat data gives a horizontal line") {
  const int n = 64;
  const auto zero = SpectralField::zeros(n, Parity::Even);
  const auto c = integrate_interface(zero, SpectralField::zeros(n, Parity::Odd), SpectralField::constant(n, 1.0), -1.0);
  for (int j = 0; j < n; ++j) {
    CHECK(c.z[j].real() == doctest::Approx(-c.alpha[j]).epsilon(1e-14));
    CHECK(c.z[j].imag() == doctest::Approx(-1.0).epsilon(1e-14));
  }
}

TEST_CASE("vorticity moves the interface at first order") {
  WaveParams P0 = point_params(0.3, 0.0, 128);
  const auto base = reconstruct_interface(crapper_state(P0), P0);
  double d[2];
  int i = 0;
  for (double w : {2e-3, 1e-3}) {
    const auto P = point_params(0.3, w, 128);
    d[i++] = max_distance(reconstruct_interface(crapper_state(P), P), base);
  }
  CHECK(d[0] > 1e-6);
  CHECK(d[1] / d[0] == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("overhang appears past A = sqrt(2) - 1") {
  CHECK_FALSE(detect_overhang(crapper_interface(0.40, 256)).overhanging);
  CHECK_FALSE(detect_overhang(crapper_interface(0.41, 256)).overhanging);
  const auto o = detect_overhang(crapper_interface(0.42, 256));
  CHECK(o.overhanging);
  CHECK(o.measure > 1e-3);
}

TEST_CASE("self-intersection appears between A = 0.45 and 0.46") {
  CHECK_FALSE(detect_self_intersection(crapper_interface(0.45, 512)));
  CHECK_FALSE(detect_self_intersection(crapper_interface(0.30, 128)));
  const auto info = find_self_intersections(crapper_interface(0.46, 512));
  CHECK(info.crossing);
  CHECK(info.crossings >= 2);
}

TEST_CASE("figure-eight is detected and an ellipse is not") {
  const double d = 0.013;  // keep the crossing off the nodes
  const auto eight = closed_curve(
      64, [d](double a) { return Point(std::sin(a + d), std::sin(a + d) * std::cos(a + d)); },
      [d](double a) { return Point(std::cos(a + d), std::cos(2 * (a + d))); });
  CHECK(find_self_intersections(eight).crossing);
  const auto ellipse = closed_curve(
      64, [](double a) { return Point(2 * std::cos(a), std::sin(a)); },
      [](double a) { return Point(-2 * std::sin(a), std::cos(a)); });
  CHECK_FALSE(find_self_intersections(ellipse).crossing);
}

TEST_CASE("curvature of circles, lines and ellipses") {
  for (double R : {0.5, 1.0, 3.0}) {
    const auto c = closed_curve(
        64, [R](double a) { return R * std::exp(Point(0, a)); }, [R](double a) { return Point(0, R) * std::exp(Point(0, a)); });
    const auto k = curvature(c);
    for (int j = 0; j < 64; ++j) CHECK(k[j] == doctest::Approx(1.0 / R).epsilon(1e-12));
  }
  const auto line = crapper_interface(0.0, 64);
  CHECK(curvature(line).sup_norm() <= 1e-14);

  const double a = 2.0, b = 1.0;
  const auto e = closed_curve(
      128, [=](double t) { return Point(a * std::cos(t), b * std::sin(t)); },
      [=](double t) { return Point(-a * std::sin(t), b * std::cos(t)); });
  const auto k = curvature(e);
  for (int j = 0; j < 128; ++j) {
    const double t = e.alpha[j];
    const double s = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
    CHECK(k[j] == doctest::Approx(a * b / std::pow(s, 1.5)).epsilon(1e-10));
  }
}

TEST_CASE("Crapper interface satisfies the curvature form of the pressure condition") {
  for (double A : {0.2, 0.4}) {
    const int n = 256;
    const auto tau = crapper_theta_tau(A, n).second;
    const auto k = curvature(crapper_interface(A, n));
    const double q = q_of_A(A);
    for (int j = 0; j < n; ++j) CHECK(std::abs(std::sinh(tau[j]) + q * k[j] * std::exp(-tau[j])) <= 1e-8);
  }
}

TEST_CASE("curvature rejects a stalled parametrization") {
  auto c = crapper_interface(0.2, 32);
  c.dz[5] = Point(0, 0);
  try {
    curvature(c);
    FAIL("expected DegenerateParametrization");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::DegenerateParametrization);
  }
}

TEST_CASE("integrate_interface checks grids") {
  CHECK_THROWS_AS(integrate_interface(SpectralField::zeros(32), SpectralField::zeros(16), SpectralField::constant(32, 1.0)),
                  Error);
}
