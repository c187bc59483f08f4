#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cwblowup/grid.hpp"
#include "cwblowup/params.hpp"
#include "cwblowup/state.hpp"
#include "cwblowup/stepper.hpp"

namespace cwblowup {

/// One row per state U^n, n = 0..n_final. tau_n is the step taken from U^n
/// (zero on the final row, where no step was taken); u_* are read at the
/// middle index m of the grid U^n lives on, NaN where m +- 2 leaves the grid.
struct HistoryRecord {
  std::int64_t n = 0;
  double t = 0.0;
  double tau_n = 0.0;
  double h_n = 0.0;
  double sup_norm = 0.0;
  double u_m = 0.0;
  double u_m_minus_1 = 0.0;
  double u_m_minus_2 = 0.0;
  double u_m_plus_1 = 0.0;
  double u_m_plus_2 = 0.0;
  int intervals = 0;
  /// The grid was refined just before this row.
  bool regridded = false;

  /// Value at middle offset -2..2.
  [[nodiscard]] double at_offset(int offset) const;
};

struct Snapshot {
  std::int64_t n = 0;
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u;
};

struct RunHistory {
  std::vector<HistoryRecord> records;
  std::vector<Snapshot> snapshots;
};

enum class RunStatus { BlewUp, BudgetExhausted, SolverError };
[[nodiscard]] const char* to_string(RunStatus status);

struct RunOutcome {
  RunStatus status = RunStatus::BudgetExhausted;
  std::optional<StepErrorKind> error;
  std::string message;
  /// Sum of the time steps taken, accumulated with compensation.
  double t_num_partial = 0.0;
  /// Geometric tail estimate past the last step (BlewUp only, else 0).
  double t_num_tail = 0.0;
  std::int64_t n_final = 0;
  SolutionState final_state;
  int final_intervals = 0;
  /// u_m^0, the initial peak.
  double initial_peak = 0.0;
  int regrid_count = 0;
};

struct RunResult {
  RunOutcome outcome;
  RunHistory history;
};

struct StepEvent {
  const SolutionState& before;
  const Grid& grid;
  const StepResult& result;
};

struct RunOptions {
  /// Full (x, u) snapshot every this many steps; 0 disables snapshots.
  std::int64_t snapshot_every = 0;
  /// Called after every accepted step.
  std::function<void(const StepEvent&)> observer;
};

/// Runs the scheme until the sup norm reaches blow_threshold, max_steps steps
/// were taken, or the stepper fails. Before each step the spacing target is
/// recomputed and the state is moved to a finer grid when the snapped interval
/// count grows. Throws std::invalid_argument if the parameters fail validation
/// or the initial data is inadmissible; solver failures end up in the outcome.
[[nodiscard]] RunResult run(const SimParams& params, const InitialData& initial, const RunOptions& options = {});

/// tau_last * r / (1 - r) with r = (1 + tau)^-(p-1): the remaining sum if
/// u_m keeps growing by the limiting factor 1 + tau.
[[nodiscard]] double tail_estimate(const RunOutcome& outcome, const SimParams& params);

/// The solution at time t_target, linearly interpolated between the two
/// bracketing steps.
struct TimeSlice {
  Grid grid;
  std::vector<double> u;
  std::int64_t steps = 0;
};

/// Throws std::runtime_error if the run blows up, fails, or runs out of steps
/// before reaching t_target.
[[nodiscard]] TimeSlice advance_to(const SimParams& params, const InitialData& initial, double t_target);

/// Independent runs, evaluated concurrently; results keep the input order.
[[nodiscard]] std::vector<RunResult> run_many(const std::vector<SimParams>& params, const InitialData& initial);

}  // namespace cwblowup
