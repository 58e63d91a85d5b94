#pragma once

#include <Eigen/Dense>

#include <vector>

#include "crapper/curve.hpp"
#include "crapper/spectral.hpp"

namespace crapper {

// Periodized Birkhoff-Rott integral on the interface, alternating-point rule.
// Returns velocities as v1 + i v2.
std::vector<Point> birkhoff_rott(const InterfaceCurve& curve, const SpectralField& strength);

// Matrix K with conj(BR)_j = sum_i K(j, i) strength_i.
Eigen::MatrixXcd birkhoff_rott_matrix(const InterfaceCurve& curve);

// Real matrix of omega -> 2 BR(z, omega) . dz.
Eigen::MatrixXd sheet_tangential_matrix(const InterfaceCurve& curve);

// Velocity induced at arbitrary off-curve targets by the periodic sheet.
std::vector<Point> sheet_velocity(const InterfaceCurve& curve, const SpectralField& strength,
                                  const std::vector<Point>& targets);
// Matrix form of the conjugate velocity at the targets.
Eigen::MatrixXcd sheet_velocity_matrix(const InterfaceCurve& curve, const std::vector<Point>& targets);

std::vector<Point> point_vortex_velocity(const InterfaceCurve& curve, double omega0);

// Unit shape (r = 1, center 0) and its derivative at one parameter value.
Point patch_shape(double alpha);
Point patch_shape_derivative(double alpha);

PatchBoundary patch_boundary(double r, int n, Point center = Point(0.0, -1.0),
                             double work_center_psi = -0.6931471805599453);

std::vector<Point> patch_velocity_on_curve(const InterfaceCurve& target, const PatchBoundary& patch,
                                           double omega0);

// Normal-velocity functional on the patch nodes: sheet term plus the
// principal-value log self term.
SpectralField patch_self_velocity(const PatchBoundary& patch, const InterfaceCurve& curve,
                                  const SpectralField& strength, double omega0);

// Self term alone, (omega0 / 2 pi) PV int log|gamma - gamma'| dgamma' . dgamma^perp.
SpectralField patch_log_self_term(const PatchBoundary& patch, double omega0);

// Minimum distance between any patch node and any curve node (with periodic copies).
double min_patch_curve_distance(const PatchBoundary& patch, const InterfaceCurve& curve);

}  // namespace crapper
