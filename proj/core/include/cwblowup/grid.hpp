#pragma once

#include <span>
#include <vector>

#include "cwblowup/params.hpp"
#include "cwblowup/state.hpp"

namespace cwblowup {

/// Uniform grid on [-1, 1] with an even number K of intervals, so that the
/// middle node x_m = 0 exists. N = K - 1 interior nodes, m = K / 2.
class Grid {
 public:
  /// Exactly K intervals. Throws std::invalid_argument unless K is even and >= 2.
  static Grid with_intervals(int intervals);

  [[nodiscard]] double spacing() const { return spacing_; }
  [[nodiscard]] int intervals() const { return intervals_; }
  [[nodiscard]] int interior_count() const { return intervals_ - 1; }
  [[nodiscard]] int middle() const { return intervals_ / 2; }
  [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
  [[nodiscard]] double x(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
  /// tau_n / h_n^2.
  [[nodiscard]] double mesh_ratio(double tau_n) const { return tau_n / (spacing_ * spacing_); }

  friend bool operator==(const Grid& a, const Grid& b) { return a.intervals_ == b.intervals_; }

 private:
  explicit Grid(int intervals);

  double spacing_;
  int intervals_;
  std::vector<double> nodes_;
};

/// tau * min(1, sup_norm^(1-p)). Throws std::domain_error if sup_norm <= 0.
[[nodiscard]] double compute_tau(const SimParams& params, double sup_norm);

/// min(h, (2 sup_norm^(1-q))^(1/(2-q))), before snapping. Throws
/// std::domain_error if sup_norm <= 0 or q >= 2.
[[nodiscard]] double compute_h(const SimParams& params, double sup_norm);

/// Smallest even K with 2/K <= h_target. Throws std::invalid_argument unless
/// 0 < h_target <= 2.
[[nodiscard]] Grid build_grid(double h_target);

/// Spacing the adaptive rule reaches when the sup norm hits blow_threshold.
/// Starting a run at or below it keeps the grid fixed for the whole run.
[[nodiscard]] double terminal_spacing(const SimParams& params);

/// Transfers a state onto a finer (or identical) grid by piecewise-linear
/// interpolation. Left-half values are interpolated from left-half data and
/// right-half values from right-half data, so symmetric input stays bit-exact
/// symmetric; x = 0 and the boundary are carried exactly. Throws
/// std::invalid_argument when asked to coarsen.
[[nodiscard]] SolutionState regrid(const SolutionState& state, const Grid& from, const Grid& to);

}  // namespace cwblowup
