#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crapper/crapper.hpp"
#include "crapper/elliptic.hpp"
#include "crapper/error.hpp"

using namespace crapper;
using std::numbers::pi;

namespace {

double odd_defect(const SpectralField& f) {
  double e = 0.0;
  const int n = f.size();
  for (int j = 0; j < n; ++j) e = std::max(e, std::abs(f[j] + f[reflect_index(j, n)]));
  return e;
}

double even_defect(const SpectralField& f) {
  double e = 0.0;
  const int n = f.size();
  for (int j = 0; j < n; ++j) e = std::max(e, std::abs(f[j] - f[reflect_index(j, n)]));
  return e;
}

template <class F>
double stencil_laplacian(F&& f, double x, double y, double h) {
  return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
}

}  // namespace

TEST_CASE("G2 is harmonic away from the pole and even in phi") {
  GreensKernel g;
  auto G = [&](double x, double y) { return g.G(x, y); };
  for (auto [x, y] : {std::pair{0.7, -0.3}, {2.0, -1.5}, {-1.2, 0.8}, {3.0, -4.0}}) {
    CHECK(std::abs(stencil_laplacian(G, x, y, 1e-3)) < 1e-6);
    CHECK(g.G(x, y) == doctest::Approx(g.G(-x, y)).epsilon(1e-15));
  }
}

TEST_CASE("G2 derivatives match finite differences") {
  GreensKernel g;
  const double h = 1e-5;
  for (auto [x, y] : {std::pair{0.7, -0.3}, {2.0, -1.5}, {-0.1, 0.05}}) {
    CHECK(g.d_phi(x, y) == doctest::Approx((g.G(x + h, y) - g.G(x - h, y)) / (2 * h)).epsilon(1e-7));
    CHECK(g.d_psi(x, y) == doctest::Approx((g.G(x, y + h) - g.G(x, y - h)) / (2 * h)).epsilon(1e-7));
    CHECK(g.d_psi_psi(x, y) ==
          doctest::Approx((g.d_psi(x, y + h) - g.d_psi(x, y - h)) / (2 * h)).epsilon(1e-6));
    CHECK(g.d_phi_psi(x, y) ==
          doctest::Approx((g.d_phi(x, y + h) - g.d_phi(x, y - h)) / (2 * h)).epsilon(1e-6));
    CHECK(g.d_phi_phi(x, y) ==
          doctest::Approx((g.d_phi(x + h, y) - g.d_phi(x - h, y)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("G2 cell integral matches fine quadrature") {
  GreensKernel g;
  const double a = 0.01, b = 0.02;
  const int m = 400;  // even: midpoints avoid the pole
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double x = -a + (i + 0.5) * 2 * a / m, y = -b + (j + 0.5) * 2 * b / m;
      acc += g.G(x, y);
    }
  acc *= 4 * a * b / (double(m) * m);
  CHECK(g.cell_integral(a, b) == doctest::Approx(acc).epsilon(1e-4));
}

TEST_CASE("point_W0 examples") {
  const auto zero = SpectralField::zeros(64, Parity::Odd);
  CHECK(point_W0(zero, 0.0, 0.0, 0.5) == 1.0);
  CHECK(point_W0(zero, 0.0, 0.01, 0.5) == doctest::Approx(std::exp(0.02)).epsilon(1e-15));
  const auto theta = crapper_theta_tau(0.2, 64).first;
  double prev = 1.0;
  for (double w : {0.001, 0.01, 0.05}) {
    const double W = point_W0(theta, 0.0, w, 0.5);
    CHECK(W > prev);
    prev = W;
  }
  CHECK_THROWS_AS(point_W0(zero, 0.0, 0.01, 1.0), Error);
  CHECK_THROWS_AS(point_W0(zero, 0.0, 0.01, 0.0), Error);
}

TEST_CASE("point tau_tilde on a flat base is the vortex image") {
  const int n = 128;
  const double rho0 = 0.5;
  GreensKernel g;
  for (double w : {0.0, 0.01}) {
    auto f = point_tilde_tau(SpectralField::zeros(n, Parity::Odd), w, rho0);
    for (int j = 0; j < n; ++j)
      CHECK(f.tau_tilde[j] == doctest::Approx(-g.d_psi(grid_point(j, n), -std::log(rho0))).epsilon(1e-13));
    CHECK(f.W0 == doctest::Approx(std::exp(w / rho0)).epsilon(1e-14));
    CHECK(f.tau_tilde_at_vortex == 0.0);
  }
}

TEST_CASE("point corrections: parity, constant W and the small-omega coefficient") {
  const int n = 128;
  const auto theta = crapper_theta_tau(0.2, n).first;
  auto f = point_tilde_tau(theta, 0.01, 0.5);
  CHECK(even_defect(f.tau_tilde) < 1e-10);
  CHECK(even_defect(f.tau_tilde_dpsi) < 1e-10);
  CHECK(odd_defect(f.theta_tilde) < 1e-10);
  for (int j = 0; j < n; ++j) CHECK(f.W_interface[j] == f.W0);
  CHECK(f.iterations < 50);

  PointTildeTau m(theta, 1e-7, 0.5);
  const double c = std::exp(-2.0 * m.tau_at_vortex()) / 0.5;
  CHECK(m.smooth_coefficient() == doctest::Approx(2.0 * c).epsilon(1e-12));
  // (W0^2 - 1)/(omega0 W0) form of the same coefficient
  PointTildeTau m2(theta, 0.05, 0.5);
  const double W0 = m2.W0();
  CHECK(m2.smooth_coefficient() == doctest::Approx((W0 * W0 - 1.0) / (0.05 * W0)).epsilon(1e-13));
}

TEST_CASE("point tau_tilde satisfies its Poisson equation away from the vortex") {
  const auto theta = crapper_theta_tau(0.2, 128).first;
  PointTildeTau m(theta, 0.01, 0.5);
  auto f = [&](double x, double y) { return m.value(x, y); };
  const double h = 1e-3;
  double scale = 0.0;
  for (int j = 0; j < 64; ++j) scale = std::max(scale, std::abs(m.value(-pi + 2 * pi * j / 64, -0.1)));
  for (auto [x, y] : {std::pair{0.5, -0.2}, {2.0, -0.4}, {-1.0, -1.5}, {0.3, -0.9}, {3.0, -0.05}}) {
    // the h^2 truncation of the stencil dominates near the vortex; one Richardson step removes it
    const double lap = (4.0 * stencil_laplacian(f, x, y, h / 2) - stencil_laplacian(f, x, y, h)) / 3.0;
    const double res = lap - m.laplacian_source(x, y);
    INFO(x, " ", y);
    CHECK(std::abs(res) <= 1e-6 * scale);
  }
}

TEST_CASE("point tau_tilde normal derivative matches finite differences") {
  const auto theta = crapper_theta_tau(0.3, 128).first;
  PointTildeTau m(theta, 0.02, 0.5);
  const double h = 1e-6;
  for (double x : {0.0, 0.4, 1.7, 3.0}) {
    const double fd = (m.value(x, -0.1 + h) - m.value(x, -0.1 - h)) / (2 * h);
    CHECK(m.d_psi(x, -0.1) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("point theta_tilde: trivial and flat-base cases") {
  const int n = 128;
  CorrectionFields z;
  z.tau_tilde = SpectralField::zeros(n, Parity::Even);
  z.tau_tilde_dpsi = SpectralField::zeros(n, Parity::Even);
  z.W0 = 1.0;
  z.W_rate = SpectralField::zeros(n, Parity::Even);
  const auto t = point_tilde_theta(z, SpectralField::zeros(n, Parity::Odd), 0.0);
  CHECK(t.sup_norm() == 0.0);

  // flat base at omega0 = 0: (theta_tilde, tau_tilde) is a conjugate pair on psi = 0
  auto f = point_tilde_tau(SpectralField::zeros(n, Parity::Odd), 0.0, 0.5);
  CHECK(odd_defect(f.theta_tilde) < 1e-12);
  const auto h = hilbert(f.theta_tilde);
  const double m = (f.tau_tilde + h).mean();
  for (int j = 0; j < n; ++j) CHECK(std::abs(f.tau_tilde[j] + h[j] - m) < 1e-10);
}

TEST_CASE("point correction input checks") {
  const auto theta = SpectralField::zeros(64, Parity::Odd);
  CHECK_THROWS_AS(point_tilde_tau(theta, 0.2, 0.5), Error);
  try {
    point_tilde_tau(theta, 0.2, 0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
  try {
    point_tilde_tau(theta, 0.01, 1.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
}

TEST_CASE("patch half height solves b cot b = xi") {
  CHECK(patch_half_height(0.0) == doctest::Approx(pi / 2));
  CHECK(patch_half_height(1.0) == 0.0);
  for (double xi : {0.1, 0.5, 0.9, 0.999}) {
    const double b = patch_half_height(xi);
    CHECK(b * std::cos(b) / std::sin(b) == doctest::Approx(xi).epsilon(1e-12));
    CHECK(patch_half_height(-xi) == b);
  }
}

TEST_CASE("patch correction at omega0 = 0 is b in one step with W = 1") {
  const int n = 128;
  const auto theta = crapper_theta_tau(0.2, n).first;
  auto f = patch_tilde_tau(theta, 0.0, 0.05, std::log(0.5));
  CHECK(f.iterations == 1);
  for (int j = 0; j < n; ++j) CHECK(f.W_interface[j] == 1.0);
  CHECK(even_defect(f.tau_tilde) < 1e-10);
  CHECK(odd_defect(f.theta_tilde) < 1e-10);
}

TEST_CASE("patch Picard contraction at A = 0.2, r = 0.05, omega0 = 0.01") {
  const int n = 128;
  const auto theta = crapper_theta_tau(0.2, n).first;
  auto f = patch_tilde_tau(theta, 0.01, 0.05, std::log(0.5));
  REQUIRE(f.increments.size() >= 2);
  CHECK(f.increments.back() < 1e-11);
  CHECK(f.contraction <= 0.5);
  // geometric and non-increasing after the second step
  for (std::size_t i = 3; i < f.increments.size(); ++i) {
    const double r1 = f.increments[i - 1] / f.increments[i - 2];
    const double r2 = f.increments[i] / f.increments[i - 1];
    if (f.increments[i] > 1e-14) CHECK(r2 <= r1 * 1.05);
  }
  CHECK(even_defect(f.tau_tilde) < 1e-10);
  CHECK(even_defect(f.W_interface) < 1e-10);
  CHECK(odd_defect(f.theta_tilde) < 1e-10);
}

TEST_CASE("patch W is 1 outside the shadow and at least 1 - C|omega0| inside") {
  const int n = 128;
  const double r = 0.2;
  const auto theta = crapper_theta_tau(0.2, n).first;
  for (double w : {0.01, -0.01}) {
    auto f = patch_tilde_tau(theta, w, r, std::log(0.5));
    int inside = 0;
    for (int j = 0; j < n; ++j) {
      const double a = grid_point(j, n);
      if (std::abs(a) >= r) {
        CHECK(f.W_interface[j] == 1.0);
      } else {
        ++inside;
        CHECK(f.W_interface[j] >= 1.0 - std::abs(w) * 5.0);
        CHECK(f.W_rate[j] > 0.0);
      }
    }
    CHECK(inside > 0);
  }
}

TEST_CASE("patch W on a flat base follows the chord length") {
  const int n = 128;
  const auto flat = SpectralField::zeros(n, Parity::Odd);
  for (double r : {0.05, 0.1}) {
    auto f = patch_tilde_tau(flat, 1e-4, r, std::log(0.5));
    const int j0 = n / 2;  // alpha = 0
    CHECK(grid_point(j0, n) == 0.0);
    // chord through the centre has psi-length pi r
    CHECK(f.W_rate[j0] == doctest::Approx(pi * r).epsilon(1e-3));
    // off-centre chord
    const int j1 = j0 + 1;
    const double xi = grid_point(j1, n) / r;
    if (xi < 1.0) CHECK(f.W_rate[j1] == doctest::Approx(2 * r * patch_half_height(xi)).epsilon(1e-3));
  }
}

TEST_CASE("patch tau_tilde vanishes as r shrinks") {
  const int n = 128;
  const auto theta = crapper_theta_tau(0.2, n).first;
  auto f1 = patch_tilde_tau(theta, 0.01, 0.08, std::log(0.5));
  auto f2 = patch_tilde_tau(theta, 0.01, 0.04, std::log(0.5));
  auto f3 = patch_tilde_tau(theta, 0.01, 0.02, std::log(0.5));
  const double n1 = f1.tau_tilde.sup_norm(), n2 = f2.tau_tilde.sup_norm(), n3 = f3.tau_tilde.sup_norm();
  CHECK(n2 / n1 < 0.55);
  CHECK(n3 / n2 < 0.55);
  auto f0 = patch_tilde_tau(theta, 0.01, 0.0, std::log(0.5));
  CHECK(f0.tau_tilde.sup_norm() == 0.0);
  CHECK(f0.theta_tilde.sup_norm() == 0.0);
}

TEST_CASE("patch tau_tilde is harmonic outside the source strip") {
  const int n = 64;
  const auto theta = crapper_theta_tau(0.2, n).first;
  const double r = 0.05, pp = std::log(0.5);
  auto f = [&](double x, double y) { return patch_tilde_tau_at(theta, 0.01, r, pp, x, y); };
  for (auto [x, y] : {std::pair{1.0, -0.5}, {-2.0, -1.0}}) {
    const double lap = stencil_laplacian(f, x, y, 1e-3);
    CHECK(std::abs(lap) < 1e-6 * (1.0 + std::abs(f(x, y))));
  }
}

TEST_CASE("patch theta_tilde: trivial case, parity and omega0 slope") {
  const int n = 128;
  CorrectionFields z;
  z.tau_tilde = SpectralField::zeros(n, Parity::Even);
  z.tau_tilde_dpsi = SpectralField::zeros(n, Parity::Even);
  z.W_rate = SpectralField::zeros(n, Parity::Even);
  z.W_interface = SpectralField::constant(n, 1.0);
  const auto theta = crapper_theta_tau(0.2, n).first;
  CHECK(patch_tilde_theta(z, theta, 0.01).sup_norm() == 0.0);

  auto f1 = patch_tilde_tau(theta, 0.005, 0.05, std::log(0.5));
  auto f2 = patch_tilde_tau(theta, 0.01, 0.05, std::log(0.5));
  CHECK(odd_defect(f1.theta_tilde) < 1e-10);
  const double diff = (f2.theta_tilde - f1.theta_tilde).sup_norm();
  CHECK(diff < 0.1 * f1.theta_tilde.sup_norm());
}

TEST_CASE("patch touching the strip boundary is rejected") {
  const auto theta = SpectralField::zeros(64, Parity::Odd);
  try {
    patch_tilde_tau(theta, 0.01, 0.5, std::log(0.5));
    FAIL("expected PatchTouchesBoundary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PatchTouchesBoundary);
  }
  try {
    patch_tilde_tau(theta, 0.01, 0.5, -7.5);
    FAIL("expected PatchTouchesBoundary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PatchTouchesBoundary);
  }
}
