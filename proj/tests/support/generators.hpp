#pragma once

// Seeded generators shared by the property tests and the acceptance suite.

#include <cstdint>
#include <random>
#include <vector>

#include "cwblowup/state.hpp"
#include "cwblowup/tridiag.hpp"

namespace cwblowup::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Symmetric profile on K intervals, strictly increasing on the left half,
/// zero at both ends, peak exactly `peak` at the middle node.
inline SolutionState random_symmetric_monotone(Rng& rng, int intervals, double peak) {
  const int m = intervals / 2;
  std::vector<double> left(static_cast<std::size_t>(m + 1), 0.0);
  for (int j = 1; j <= m; ++j) left[static_cast<std::size_t>(j)] = left[static_cast<std::size_t>(j - 1)] + uniform(rng, 0.05, 1.0);
  const double scale = peak / left[static_cast<std::size_t>(m)];
  SolutionState s;
  s.u.assign(static_cast<std::size_t>(intervals + 1), 0.0);
  for (int j = 1; j <= m; ++j) {
    const double v = j == m ? peak : left[static_cast<std::size_t>(j)] * scale;
    s.u[static_cast<std::size_t>(j)] = v;
    s.u[static_cast<std::size_t>(intervals - j)] = v;
  }
  return s;
}

/// Random strictly diagonally dominant system of size n.
inline TriDiagSystem random_dominant_system(Rng& rng, std::size_t n) {
  TriDiagSystem sys;
  sys.diag.resize(n);
  sys.rhs.resize(n);
  sys.sub.resize(n > 0 ? n - 1 : 0);
  sys.sup.resize(n > 0 ? n - 1 : 0);
  for (auto& v : sys.sub) v = uniform(rng, -1.0, 1.0);
  for (auto& v : sys.sup) v = uniform(rng, -1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    if (i > 0) off += std::abs(sys.sub[i - 1]);
    if (i + 1 < n) off += std::abs(sys.sup[i]);
    const double margin = uniform(rng, 0.05, 2.0);
    sys.diag[i] = (rng() & 1U) ? off + margin : -(off + margin);
    sys.rhs[i] = uniform(rng, -5.0, 5.0);
  }
  return sys;
}

}  // namespace cwblowup::testing
