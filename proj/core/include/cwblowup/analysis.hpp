#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwblowup/params.hpp"
#include "cwblowup/simulator.hpp"

namespace cwblowup {

// ---------------------------------------------------------------------------
// Blow-up set classification
// ---------------------------------------------------------------------------

enum class Verdict { BlowsUp, Bounded, Undetermined };
[[nodiscard]] const char* to_string(Verdict verdict);

struct OffsetEvidence {
  int offset = 0;
  Verdict verdict = Verdict::Undetermined;
  /// What the discrete theory predicts for this offset, if it covers the run.
  std::optional<Verdict> expected;
  /// Which rule produced the verdict: "stop_condition", "geometric",
  /// "non_summable_increments", "saturated", "regrid_in_window", "off_grid"
  /// or "inconclusive".
  std::string basis;
  double final_value = 0.0;
  double window_start_value = 0.0;
  /// |v_end - v_start| / |v_start| over the final window.
  double relative_change = 0.0;
  /// Geometric-mean per-step growth over the final window.
  double growth_ratio = 0.0;
  /// Mean increment over the second half of the window divided by the mean
  /// over the first half. Near 1 for linear growth, near 0 for saturation.
  double increment_trend = 0.0;
};

struct BlowupReport {
  Regime regime = Regime::Uncovered;
  /// The regime's hypotheses hold (for the three-point case this includes
  /// h < 1/(1 + tau)).
  bool theory_applies = false;
  /// Final window: the last records over which u_m grew by window_peak_growth.
  std::size_t window_start = 0;
  std::size_t window_steps = 0;
  double window_peak_growth = 0.0;
  bool regrid_in_window = false;
  /// Offsets -2, -1, 0, 1, 2 from the middle node.
  std::array<OffsetEvidence, 5> offsets{};

  [[nodiscard]] const OffsetEvidence& at(int offset) const { return offsets.at(static_cast<std::size_t>(offset + 2)); }
  /// Observed verdicts agree with the expected ones wherever an expectation exists.
  [[nodiscard]] bool matches_theory() const;
};

/// Growth factor of u_m that defines the final window.
inline constexpr double kClassifierWindowGrowth = 100.0;
/// Relative drift below which an offset counts as saturated.
inline constexpr double kBoundedDrift = 0.01;

/// Per-offset verdicts on a blown-up, symmetric run. An offset blows up if
/// it either grows geometrically (value above sqrt(blow_threshold) with
/// per-step ratio above 1 + tau/2) or keeps a non-decaying positive increment
/// across the final window (so its increments cannot sum to a finite limit);
/// it is bounded if it drifts by less than 1% while u_m grows 100-fold.
/// Offsets whose node moved through a regrid inside the window are
/// Undetermined. Throws std::invalid_argument for an empty, non-blown-up or
/// asymmetric history.
[[nodiscard]] BlowupReport classify_blowup_set(const RunHistory& history, const SimParams& params);

// ---------------------------------------------------------------------------
// Peak-ratio diagnostics a_n = u_{m-1} / u_m
// ---------------------------------------------------------------------------

struct StepDiagnostics {
  std::int64_t n = 0;
  double a_n = 0.0;
  /// a_{n+1} / a_n.
  double ratio_a = 0.0;
  /// u_m^{n+1} / u_m^n.
  double growth = 0.0;
  /// The grid changed between n and n+1.
  bool regridded = false;
};

struct PeakRatioSummary {
  bool applicable = false;
  std::string reason;
  std::size_t window = 0;
  double growth_mean = 0.0;
  double growth_target = 0.0;
  double growth_deviation = 0.0;  // relative
  double ratio_a_mean = 0.0;
  double ratio_a_target = 0.0;
  double ratio_a_deviation = 0.0;  // relative
  std::size_t decreasing_window = 0;
  bool a_strictly_decreasing = false;
  bool regrid_in_window = false;
  /// sup_n u_{m-1}^n compared with 3 (1 + tau) / h^2, the assumption used
  /// for the p = 2, q = 1 limit of a_n.
  double sup_u_m_minus_1 = 0.0;
  double sup_condition_threshold = 0.0;
  bool sup_condition_observed = false;

  /// Growth within growth_tol of 1 + tau, ratio within ratio_tol of
  /// 1/(1 + tau), and a_n strictly decreasing over the decreasing window.
  [[nodiscard]] bool passes(double growth_tol = 0.01, double ratio_tol = 0.02) const;
};

struct PeakRatioReport {
  std::vector<StepDiagnostics> steps;
  PeakRatioSummary summary;
};

/// The a_n sequence for the whole run plus limit statistics over the final
/// `window` steps. The limits are only computed in the single-point regime
/// (p > 2, q < 2(p-1)/p) on a blown-up run; elsewhere the summary is marked
/// not applicable.
[[nodiscard]] PeakRatioReport peak_ratio_diagnostics(const RunHistory& history, const SimParams& params,
                                                std::size_t window = 50, std::size_t decreasing_window = 200);

// ---------------------------------------------------------------------------
// Blow-up time bounds
// ---------------------------------------------------------------------------

/// 1 / ((p - 1) peak^(p-1)), the lower bound on the continuous blow-up time.
[[nodiscard]] double souplet_weissler_lower_bound(double p, double peak);

/// tau / peak^(p-1) / (1 - r^(p-1)) with
/// r = (1 + tau 2^(-q/(2-q)) peak^((-2p + q(1+p))/(2-q))) / (1 + tau):
/// the sum of the time steps under the guaranteed growth of u_m. Empty when
/// r^(p-1) >= 1.
[[nodiscard]] std::optional<double> geometric_time_bound(double p, double q, double tau, double peak);

struct TimeBounds {
  double t_num = 0.0;
  double tail = 0.0;
  double g_lambda = 0.0;
  std::optional<double> t_star_star;
  bool lower_ok = false;
  std::optional<bool> upper_ok;
  /// g <= t_num + tail <= T**; false when T** is not applicable.
  bool sandwich_ok = false;
};

/// Throws std::invalid_argument unless the outcome blew up.
[[nodiscard]] TimeBounds blowup_time_bounds(const RunOutcome& outcome, const SimParams& params);

// ---------------------------------------------------------------------------
// Convergence by grid refinement
// ---------------------------------------------------------------------------

enum class ConvergenceCase {
  SinglePoint,  // p > 2, q < 2(p-1)/p: nodes 1..m-2, order 3 - q
  LinearGradient,  // q = 1: nodes 1..m-1, order 2
  Uncovered,    // no stated order; nodes 1..m-2
};
[[nodiscard]] const char* to_string(ConvergenceCase c);

struct ConvergenceLevel {
  double h = 0.0;
  int intervals = 0;
  std::int64_t steps = 0;
  double error = 0.0;
};

struct ConvergenceReport {
  ConvergenceCase study_case = ConvergenceCase::Uncovered;
  double t_check = 0.0;
  double reference_h = 0.0;
  int reference_intervals = 0;
  /// Compared nodes are 1..m - last_index_offset on each level.
  int last_index_offset = 2;
  std::vector<ConvergenceLevel> levels;
  /// errors[k] / errors[k+1].
  std::vector<double> error_ratios;
  double fitted_order = 0.0;
  /// NaN when the regime has no stated order.
  double expected_order = 0.0;
};

struct ConvergenceOptions {
  /// Defaults to half the numerical blow-up time of the coarsest level.
  std::optional<double> t_check;
  /// Reference spacing is the finest level divided by this (at least 4).
  int reference_factor = 4;
};

/// max_{1 <= j <= m - last_index_offset} |u_j - u_ref(x_j)| with the
/// reference sampled at the shared nodes. Throws std::invalid_argument if the
/// grids are not nested.
[[nodiscard]] double max_nodal_error(const TimeSlice& level, const TimeSlice& reference, int last_index_offset);

/// Least-squares slope of log(error) against log(h).
[[nodiscard]] double fit_order(std::span<const double> h, std::span<const double> errors);

/// Runs every level and a finer reference to t_check (concurrently) and fits
/// the observed order. Levels must number at least 3, each half the previous.
/// Throws std::invalid_argument for bad levels, non-nested grids or a bad
/// reference factor, and std::runtime_error when a level blows up before
/// t_check.
[[nodiscard]] ConvergenceReport convergence_study(const SimParams& params, const InitialData& initial,
                                                  const std::vector<double>& grid_levels,
                                                  const ConvergenceOptions& options = {});

}  // namespace cwblowup
