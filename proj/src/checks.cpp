#include "crapper/checks.hpp"

#include <cmath>
#include <numbers>

#include "crapper/geometry.hpp"
#include "crapper/residual.hpp"

namespace crapper {

namespace {

CheckRow at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, value <= limit};
}

CheckRow flag(std::string name, bool got, bool expected) {
  return {std::move(name), got ? 1.0 : 0.0, expected ? 1.0 : 0.0, got == expected};
}

}  // namespace

std::vector<CheckRow> crapper_invariants(double A, int n) {
  std::vector<CheckRow> rows;
  const auto [theta, tau] = crapper_theta_tau(A, n);
  const double q = q_of_A(A);
  const auto bern = map(hilbert(theta), [](double t) { return std::sinh(t); }, Parity::Even) + q * derivative(theta);
  rows.push_back(at_most("crapper_bernoulli", bern.sup_norm(), 1e-9));

  const auto curve = crapper_interface(A, n);
  const auto omega = crapper_sheet_strength(A, n);
  rows.push_back(at_most("kinematic_closure", (sheet_operator(omega, curve) + 2.0).sup_norm(), 1e-8));
  rows.push_back(at_most("sheet_spectral_radius", sheet_spectral_radius(curve), 0.999));

  // a fixed odd family; (Gamma theta1, cos theta_c) must vanish for every one
  const auto c = map(theta, [](double t) { return std::cos(t); }, Parity::Even);
  double worst = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const auto t1 = SpectralField::from_function(
        n, [m](double a) { return std::sin(m * a) + 0.5 * std::sin((2 * m + 1) * a) / m; }, Parity::Odd);
    worst = std::max(worst, std::abs(inner_product(gamma_operator(t1, A), c)) / t1.sup_norm());
  }
  rows.push_back(at_most("cokernel_orthogonality", worst, 1e-9));

  WaveParams P;
  P.A = A;
  P.N = n;
  const auto rec = reconstruct_interface(crapper_state(P), P);
  double dist = 0.0;
  for (int j = 0; j < n; ++j) dist = std::max(dist, std::abs(rec.z[j] - curve.z[j]));
  rows.push_back(at_most("reconstruction", dist, 1e-10));

  const auto K = curvature(curve);
  double kb = 0.0;
  for (int j = 0; j < n; ++j) kb = std::max(kb, std::abs(std::sinh(tau[j]) + q * K[j] * std::exp(-tau[j])));
  rows.push_back(at_most("curvature_bernoulli", kb, 1e-8));

  rows.push_back(flag("overhang_matches_closed_form", detect_overhang(curve).overhanging,
                      crapper_max_angle(A) > std::numbers::pi / 2));
  rows.push_back(flag("self_intersection_matches_A0", detect_self_intersection(curve), A > kCrapperA0));
  return rows;
}

std::vector<CheckRow> stored_invariants(const StoredSolution& s) {
  std::vector<CheckRow> rows;
  const auto R = residual(s.state(), s.params);
  const auto n = residual_norms(R);
  rows.push_back(at_most("projected_F1", n.F1, s.tolerance));
  rows.push_back(at_most("F2", n.F2, s.tolerance));
  if (s.params.mode == VortexMode::Patch) rows.push_back(at_most("F3", n.F3, s.tolerance));
  rows.push_back(at_most("solvability", std::abs(n.solvability), 1e-9));
  const double drift = std::max({std::abs(n.F1 - s.norms.F1), std::abs(n.F2 - s.norms.F2), std::abs(n.F3 - s.norms.F3),
                                 std::abs(n.solvability - s.norms.solvability)});
  rows.push_back(at_most("stored_norms_reproduced", drift, 1e-13));
  const auto curve = R.surface.curve;
  rows.push_back(at_most("self_intersections", find_self_intersections(curve).crossings, 0));
  if (!s.diagnostics.empty())
    rows.push_back(flag("overhang_as_recorded", detect_overhang(curve).overhanging, s.diagnostics.back().overhang));
  return rows;
}

}  // namespace crapper
