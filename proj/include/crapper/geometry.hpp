#pragma once

#include <utility>

#include "crapper/crapper.hpp"
#include "crapper/curve.hpp"
#include "crapper/spectral.hpp"

namespace crapper {

struct SolutionState;

// Integrates dz = -e^{-tau + i theta} / W from -pi. The horizontal drift
// (mean of the integrand) becomes the period shift; the curve is centred so
// that z1(0) = 0 and z2(+-pi) = anchor.
InterfaceCurve integrate_interface(const SpectralField& tau, const SpectralField& theta, const SpectralField& W,
                                   double anchor = -1.0);

// Interface of a solution state, including the vorticity corrections of its mode.
InterfaceCurve reconstruct_interface(const SolutionState& state, const WaveParams& params);

struct OverhangInfo {
  bool overhanging = false;
  double measure = 0.0;  // largest positive value of dz1
};

OverhangInfo detect_overhang(const InterfaceCurve& curve);

struct IntersectionInfo {
  bool crossing = false;
  bool near_touch = false;  // some non-adjacent pair closer than 1e-10 without crossing
  int crossings = 0;
};

IntersectionInfo find_self_intersections(const InterfaceCurve& curve);
bool detect_self_intersection(const InterfaceCurve& curve);

// Signed curvature (counterclockwise positive) from spectral derivatives of dz.
SpectralField curvature(const InterfaceCurve& curve);

}  // namespace crapper
