#pragma once

#include <string>
#include <vector>

#include "crapper/io.hpp"

namespace crapper {

struct CheckRow {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

// Closed-form invariants of the Crapper wave at amplitude A.
std::vector<CheckRow> crapper_invariants(double A, int n);
// Re-evaluates a stored state: residuals against its tolerance and the stored norms.
std::vector<CheckRow> stored_invariants(const StoredSolution& s);

// Self-intersection onset of the Crapper family.
inline constexpr double kCrapperA0 = 0.45467;

}  // namespace crapper
