#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cwblowup/compensated_sum.hpp"
#include "cwblowup/grid.hpp"
#include "cwblowup/simulator.hpp"

using namespace cwblowup;

namespace {

SimParams base(double p = 3.0, double q = 1.0) {
  SimParams s;
  s.p = p;
  s.q = q;
  return s;
}

}  // namespace

TEST_CASE("zero step budget returns the initial state") {
  SimParams p = base();
  p.max_steps = 0;
  const auto r = run(p, InitialData::sine_bump());
  CHECK(r.outcome.status == RunStatus::BudgetExhausted);
  CHECK(r.outcome.t_num_partial == 0.0);
  CHECK(r.outcome.t_num_tail == 0.0);
  CHECK(r.outcome.n_final == 0);
  CHECK(r.outcome.initial_peak == p.lambda);
  const Grid g = build_grid(p.h);
  CHECK(r.outcome.final_state.u == make_initial(p, InitialData::sine_bump(), g).u);
  REQUIRE(r.history.records.size() == 1);
  CHECK(r.history.records[0].tau_n == 0.0);
}

TEST_CASE("invalid parameters or data never start a run") {
  SimParams p = base(2.0, 1.8);
  CHECK_THROWS_AS((void)run(p, InitialData::sine_bump()), std::invalid_argument);
  p = base();
  p.lambda = 0.9;
  CHECK_THROWS_AS((void)run(p, InitialData::sine_bump()), std::invalid_argument);
}

TEST_CASE("default run blows up with a consistent history") {
  const SimParams p = base();
  const auto r = run(p, InitialData::sine_bump());
  REQUIRE(r.outcome.status == RunStatus::BlewUp);
  CHECK(r.outcome.final_state.sup_norm() >= p.blow_threshold);
  CHECK_FALSE(r.outcome.error.has_value());

  const auto& rec = r.history.records;
  REQUIRE(rec.size() == static_cast<std::size_t>(r.outcome.n_final) + 1);
  CHECK(rec.back().tau_n == 0.0);
  long double exact = 0.0L;
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
    // Late steps fall below half an ulp of t, so the rounded time only has to be nondecreasing.
    CHECK(rec[i].tau_n > 0.0);
    CHECK(rec[i + 1].t >= rec[i].t);
    CHECK(rec[i].n == static_cast<std::int64_t>(i));
    if (rec[i].tau_n > 1e-12 * rec[i].t) CHECK(rec[i + 1].t - rec[i].t == doctest::Approx(rec[i].tau_n).epsilon(1e-3));
    CHECK(rec[i].u_m_minus_1 == rec[i].u_m_plus_1);
    CHECK(rec[i].u_m_minus_2 == rec[i].u_m_plus_2);
    CHECK(rec[i].sup_norm == rec[i].u_m);
    exact += rec[i].tau_n;
  }
  // Compensated accumulation agrees with an extended-precision sum.
  CHECK(std::abs(static_cast<double>(exact) - r.outcome.t_num_partial) <= 1e-15 * r.outcome.t_num_partial);
  CHECK(r.outcome.t_num_partial == rec.back().t);
  CHECK(r.outcome.t_num_tail == doctest::Approx(tail_estimate(r.outcome, p)));
}

TEST_CASE("linear gradient keeps the grid fixed") {
  for (double h : {0.5, 0.05, 0.01}) {
    SimParams p = base(2.0, 1.0);
    p.h = h;
    const auto r = run(p, InitialData::sine_bump());
    CHECK(r.outcome.regrid_count == 0);
    for (const auto& rec : r.history.records) CHECK(rec.intervals == build_grid(h).intervals());
  }
}

TEST_CASE("superlinear gradient refines the grid and keeps the invariants") {
  const SimParams p = base(3.0, 1.2);
  int regrids = 0;
  RunOptions opts;
  opts.observer = [&](const StepEvent& e) {
    CHECK(e.before.is_symmetric());
    CHECK(e.result.next.is_symmetric());
    CHECK(e.result.next.u.front() == 0.0);
    CHECK(e.result.next.u.back() == 0.0);
  };
  const auto r = run(p, InitialData::sine_bump(), opts);
  CHECK(r.outcome.status == RunStatus::BlewUp);
  CHECK(r.outcome.regrid_count > 0);
  for (std::size_t i = 1; i < r.history.records.size(); ++i) {
    const auto& a = r.history.records[i - 1];
    const auto& b = r.history.records[i];
    CHECK(b.h_n <= a.h_n);
    if (b.regridded) ++regrids;
  }
  CHECK(regrids == r.outcome.regrid_count);
}

TEST_CASE("custom symmetric data runs") {
  const auto d = InitialData::custom({{-1, 0}, {-0.5, 20}, {0, 40}, {0.5, 20}, {1, 0}});
  const auto r = run(base(), d);
  CHECK(r.outcome.status == RunStatus::BlewUp);
  CHECK(r.outcome.initial_peak == 40.0);
}

TEST_CASE("snapshots follow the requested stride") {
  RunOptions opts;
  opts.snapshot_every = 100;
  const auto r = run(base(), InitialData::sine_bump(), opts);
  REQUIRE_FALSE(r.history.snapshots.empty());
  for (std::size_t i = 0; i < r.history.snapshots.size(); ++i) {
    const auto& s = r.history.snapshots[i];
    CHECK(s.n == static_cast<std::int64_t>(100 * i));
    CHECK(s.x.size() == s.u.size());
    CHECK(s.x.front() == -1.0);
    CHECK(s.x.back() == 1.0);
  }
}

TEST_CASE("tail estimate arithmetic") {
  RunOutcome o;
  o.final_state.tau_last = 1e-10;
  SimParams p = base(3.0);
  CHECK(tail_estimate(o, p) == doctest::Approx(4.7619047619e-10).epsilon(1e-9));
  p.p = 2.0;
  CHECK(tail_estimate(o, p) == doctest::Approx(1e-9).epsilon(1e-12));
  p.p = 400.0;
  CHECK(tail_estimate(o, p) < 1e-25);
}

TEST_CASE("compensated sum beats naive summation") {
  CompensatedSum s;
  double naive = 0.0;
  s += 1.0;
  naive += 1.0;
  for (int i = 0; i < 10'000; ++i) {
    s += 1e-16;
    naive += 1e-16;
  }
  CHECK(naive == 1.0);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));
  CompensatedSum big;
  big += 1.0;
  big += 1e100;
  big += 1.0;
  big += -1e100;
  CHECK(big.value() == 2.0);
}

TEST_CASE("time slices interpolate between steps") {
  const SimParams p = base();
  const auto r = run(p, InitialData::sine_bump());
  const auto& rec = r.history.records;
  const double t_mid = 0.5 * (rec[10].t + rec[11].t);
  const auto slice = advance_to(p, InitialData::sine_bump(), t_mid);
  const int m = slice.grid.middle();
  CHECK(slice.u[static_cast<std::size_t>(m)] == doctest::Approx(0.5 * (rec[10].u_m + rec[11].u_m)));
  CHECK(slice.steps == 11);

  const auto start = advance_to(p, InitialData::sine_bump(), 0.0);
  CHECK(start.steps == 0);
  CHECK(start.u[static_cast<std::size_t>(start.grid.middle())] == p.lambda);

  CHECK_THROWS_AS((void)advance_to(p, InitialData::sine_bump(), 2.0 * r.outcome.t_num_partial), std::runtime_error);
}

TEST_CASE("concurrent runs match sequential ones") {
  std::vector<SimParams> ps;
  for (double l : {10.0, 100.0, 1000.0}) {
    SimParams p = base();
    p.lambda = l;
    ps.push_back(p);
  }
  const auto many = run_many(ps, InitialData::sine_bump());
  REQUIRE(many.size() == 3);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto one = run(ps[i], InitialData::sine_bump());
    CHECK(many[i].outcome.t_num_partial == one.outcome.t_num_partial);
    CHECK(many[i].outcome.final_state.u == one.outcome.final_state.u);
  }
}
