#include "cwblowup/simulator.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "cwblowup/compensated_sum.hpp"

namespace cwblowup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_valid(const SimParams& params) {
  const ValidationReport report = validate(params);
  if (!report.ok()) throw std::invalid_argument("invalid parameters: " + report.failure_summary());
}

Grid initial_grid(const SimParams& params, const InitialData& initial) {
  require_valid(params);
  return build_grid(compute_h(params, initial.peak(params.lambda)));
}

double value_at(const SolutionState& s, int j) {
  if (j < 0 || j >= static_cast<int>(s.u.size())) return kNaN;
  return s.u[static_cast<std::size_t>(j)];
}

// Owns the state/grid pair and applies the refine-then-step cycle.
class Driver {
 public:
  Driver(const SimParams& params, const InitialData& initial)
      : params_(params), grid_(initial_grid(params, initial)) {
    state_ = make_initial(params, initial, grid_);
    initial_peak_ = state_.u[static_cast<std::size_t>(grid_.middle())];
  }

  // Moves to a finer grid if the spacing target calls for more intervals.
  // Only states that will be stepped from are refined.
  bool refine() {
    const double sup = state_.sup_norm();
    if (!(sup > 0.0) || sup >= params_.blow_threshold || state_.n >= params_.max_steps) return false;
    Grid target = build_grid(compute_h(params_, sup));
    if (target.intervals() <= grid_.intervals()) return false;
    state_ = regrid(state_, grid_, target);
    grid_ = std::move(target);
    ++regrids_;
    return true;
  }

  StepResult advance() {
    StepResult r = step(state_, grid_, params_);
    time_ += r.tau_n;
    r.next.t = time_.value();
    return r;
  }

  void accept(StepResult&& r) { state_ = std::move(r.next); }

  [[nodiscard]] const SolutionState& state() const { return state_; }
  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] double elapsed() const { return time_.value(); }
  [[nodiscard]] double initial_peak() const { return initial_peak_; }
  [[nodiscard]] int regrids() const { return regrids_; }

 private:
  const SimParams& params_;
  Grid grid_;
  SolutionState state_;
  CompensatedSum time_;
  double initial_peak_ = 0.0;
  int regrids_ = 0;
};

HistoryRecord make_record(const SolutionState& s, const Grid& g, bool regridded) {
  const int m = g.middle();
  HistoryRecord rec;
  rec.n = s.n;
  rec.t = s.t;
  rec.h_n = g.spacing();
  rec.sup_norm = s.sup_norm();
  rec.u_m = value_at(s, m);
  rec.u_m_minus_1 = value_at(s, m - 1);
  rec.u_m_minus_2 = value_at(s, m - 2);
  rec.u_m_plus_1 = value_at(s, m + 1);
  rec.u_m_plus_2 = value_at(s, m + 2);
  rec.intervals = g.intervals();
  rec.regridded = regridded;
  return rec;
}

}  // namespace

double HistoryRecord::at_offset(int offset) const {
  switch (offset) {
    case -2: return u_m_minus_2;
    case -1: return u_m_minus_1;
    case 0: return u_m;
    case 1: return u_m_plus_1;
    case 2: return u_m_plus_2;
    default: throw std::out_of_range("HistoryRecord::at_offset: offset outside -2..2");
  }
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::BlewUp: return "BlewUp";
    case RunStatus::BudgetExhausted: return "BudgetExhausted";
    case RunStatus::SolverError: return "SolverError";
  }
  return "unknown";
}

RunResult run(const SimParams& params, const InitialData& initial, const RunOptions& options) {
  Driver driver(params, initial);
  RunResult result;
  auto& outcome = result.outcome;
  auto& history = result.history;
  outcome.initial_peak = driver.initial_peak();

  while (true) {
    const bool regridded = driver.refine();
    const SolutionState& state = driver.state();
    history.records.push_back(make_record(state, driver.grid(), regridded));
    if (options.snapshot_every > 0 && state.n % options.snapshot_every == 0) {
      const auto nodes = driver.grid().nodes();
      history.snapshots.push_back({state.n, state.t, {nodes.begin(), nodes.end()}, state.u});
    }

    if (state.sup_norm() >= params.blow_threshold) {
      outcome.status = RunStatus::BlewUp;
      break;
    }
    if (state.n >= params.max_steps) {
      outcome.status = RunStatus::BudgetExhausted;
      break;
    }
    StepResult step_result;
    try {
      step_result = driver.advance();
    } catch (const StepError& e) {
      outcome.status = RunStatus::SolverError;
      outcome.error = e.kind();
      outcome.message = e.what();
      break;
    }
    history.records.back().tau_n = step_result.tau_n;
    if (options.observer) options.observer(StepEvent{state, driver.grid(), step_result});
    driver.accept(std::move(step_result));
  }

  outcome.t_num_partial = driver.elapsed();
  outcome.final_state = driver.state();
  outcome.n_final = outcome.final_state.n;
  outcome.final_intervals = driver.grid().intervals();
  outcome.regrid_count = driver.regrids();
  if (outcome.status == RunStatus::BlewUp) outcome.t_num_tail = tail_estimate(outcome, params);
  return result;
}

double tail_estimate(const RunOutcome& outcome, const SimParams& params) {
  const double r = std::pow(1.0 + params.tau, -(params.p - 1.0));
  return outcome.final_state.tau_last * r / (1.0 - r);
}

TimeSlice advance_to(const SimParams& params, const InitialData& initial, double t_target) {
  if (!(t_target >= 0.0)) throw std::invalid_argument("advance_to: target time must be nonnegative");
  Driver driver(params, initial);
  if (t_target == 0.0) return {driver.grid(), driver.state().u, 0};
  while (true) {
    driver.refine();
    const SolutionState& state = driver.state();
    if (state.sup_norm() >= params.blow_threshold) {
      throw std::runtime_error("advance_to: blow-up threshold reached before the target time");
    }
    if (state.n >= params.max_steps) throw std::runtime_error("advance_to: step budget exhausted");
    StepResult r;
    try {
      r = driver.advance();
    } catch (const StepError& e) {
      throw std::runtime_error(std::string("advance_to: solver error: ") + e.what());
    }
    if (r.next.t >= t_target) {
      const double w = (t_target - state.t) / (r.next.t - state.t);
      TimeSlice slice{driver.grid(), std::vector<double>(state.u.size()), state.n + 1};
      for (std::size_t j = 0; j < state.u.size(); ++j) slice.u[j] = (1.0 - w) * state.u[j] + w * r.next.u[j];
      return slice;
    }
    driver.accept(std::move(r));
  }
}

std::vector<RunResult> run_many(const std::vector<SimParams>& params, const InitialData& initial) {
  std::vector<std::future<RunResult>> jobs;
  jobs.reserve(params.size());
  for (const auto& p : params) {
    jobs.push_back(std::async(std::launch::async, [&p, &initial] { return run(p, initial); }));
  }
  std::vector<RunResult> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace cwblowup
