#pragma once

#include <complex>
#include <vector>

namespace crapper {

// Planar points and vectors are stored as x + i y.
using Point = std::complex<double>;

// Free surface sampled on the alpha grid. period_shift is the horizontal
// offset z1(alpha + 2 pi) - z1(alpha); it is -2 pi for the Crapper family
// because z1 decreases along the parametrization.
struct InterfaceCurve {
  std::vector<double> alpha;
  std::vector<Point> z;
  std::vector<Point> dz;
  double period_shift = -6.283185307179586;

  int size() const { return static_cast<int>(z.size()); }
};

// Patch boundary gamma(alpha) = center + r * shape(alpha), counterclockwise.
struct PatchBoundary {
  std::vector<double> alpha;
  std::vector<Point> gamma;
  std::vector<Point> dgamma;
  double r = 0.0;
  Point center{0.0, -1.0};
  // Same shape placed at (0, work_center_psi) in working coordinates.
  double work_center_psi = -0.6931471805599453;

  int size() const { return static_cast<int>(gamma.size()); }
};

}  // namespace crapper
