#pragma once

#include <cstdint>
#include <vector>

namespace cwblowup {

/// Discrete solution U^n = (u_0, ..., u_{N+1}) on the current grid.
struct SolutionState {
  std::vector<double> u;
  double t = 0.0;
  std::int64_t n = 0;
  double tau_last = 0.0;

  /// max |u_j| over interior nodes; zero for an empty state.
  [[nodiscard]] double sup_norm() const;
  /// Bit-exact mirror symmetry u_j == u_{N+1-j}.
  [[nodiscard]] bool is_symmetric() const;
  /// max_j |u_j - u_{N+1-j}|.
  [[nodiscard]] double asymmetry() const;
};

}  // namespace cwblowup
