#pragma once

#include <span>
#include <vector>

#include "cwblowup/grid.hpp"
#include "cwblowup/params.hpp"
#include "cwblowup/state.hpp"
#include "cwblowup/tridiag.hpp"

namespace cwblowup {

/// sgn(u_{j+1} - u_{j-1}) for every interior node j = 1..N (entry j-1).
[[nodiscard]] std::vector<int> central_signs(std::span<const double> u);

/// Linear system for one step with the sign of the level n+1 central
/// difference frozen to `signs`. Row j (entry j-1) encodes
///
///   (1 + 2 l) u_j - l (u_{j+1} + u_{j-1}) + g_j s_j (u_{j+1} - u_{j-1})
///       = u_j^n + tau_n (u_j^n)^p,
///
/// with l = tau_n / h_n^2 and g_j = tau_n (2 h_n)^-q |u_{j+1}^n - u_{j-1}^n|^(q-1).
/// Throws StepError{Stiff} if the matrix is not strictly diagonally dominant.
[[nodiscard]] TriDiagSystem assemble(const SolutionState& state, const Grid& grid,
                                     const SimParams& params, double tau_n,
                                     std::span<const int> signs);

struct StepResult {
  SolutionState next;
  /// Re-solves after the first one; at most picard_max_iters.
  int picard_iters = 0;
  /// Nodes whose frozen sign the first solve contradicted.
  int sign_flips = 0;
  /// Time step actually taken (compute_tau, possibly halved for stiffness).
  double tau_n = 0.0;
  double mesh_ratio = 0.0;
  int tau_halvings = 0;
  /// True when the half-domain solve with reflection at x = 0 was used.
  bool symmetric_solve = false;
};

/// One step of the scheme. Symmetric states are solved on nodes 1..m with
/// u_{m+1} = u_{m-1} and mirrored; anything else gets the full solve.
///
/// Throws StepError: Stiff after 20 halvings of tau_n, NoPicardFixpoint,
/// NegativeSolution (entry below -picard_tol), AboveThreshold when an input
/// entry already exceeds blow_threshold.
[[nodiscard]] StepResult step(const SolutionState& state, const Grid& grid, const SimParams& params);

}  // namespace cwblowup
