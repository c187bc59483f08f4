#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <limits>

#include "cwblowup/analysis.hpp"
#include "cwblowup/grid.hpp"

using namespace cwblowup;

namespace {

SimParams base(double p, double q, double h = 0.05) {
  SimParams s;
  s.p = p;
  s.q = q;
  s.h = h;
  return s;
}

// Sum of tau u_n^(1-p) over the guaranteed growth u_n = u_0 / r^n, added term by term.
double series_time_bound(double p, double q, double tau, double u0) {
  const long double c = std::pow(2.0L, -q / (2.0L - q)) * std::pow(static_cast<long double>(u0), (-2.0L * p + q * (1.0L + p)) / (2.0L - q));
  const long double r = (1.0L + tau * c) / (1.0L + tau);
  long double u = u0;
  long double sum = 0.0L;
  for (int n = 0; n < 1'000'000; ++n) {
    const long double term = tau * std::pow(u, 1.0L - p);
    sum += term;
    if (term < 1e-22L * sum) break;
    u /= r;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("continuous lower bound on the blow-up time") {
  CHECK(souplet_weissler_lower_bound(3.0, 10.0) == doctest::Approx(5e-3).epsilon(1e-14));
  CHECK(souplet_weissler_lower_bound(3.0, 100.0) == doctest::Approx(5e-5).epsilon(1e-14));
  CHECK(souplet_weissler_lower_bound(3.0, 1e5) == doctest::Approx(5e-11).epsilon(1e-14));
  for (double p : {2.0, 3.0, 4.5}) {
    for (double l : {2.0, 10.0, 1e3}) {
      CHECK(souplet_weissler_lower_bound(p, l) * (p - 1.0) * std::pow(l, p - 1.0) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("geometric time bound against its series") {
  for (double p : {2.5, 3.0, 4.0}) {
    for (double q : {1.0, 1.2}) {
      for (double l : {10.0, 1000.0}) {
        const auto t = geometric_time_bound(p, q, 0.1, l);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(series_time_bound(p, q, 0.1, l)).epsilon(1e-10));
      }
    }
  }
  // The published figure for lambda = 1e3, p = 3 comes out with tau = 0.01.
  const auto published = geometric_time_bound(3.0, 1.0, 0.01, 1e3);
  REQUIRE(published.has_value());
  CHECK(*published == doctest::Approx(5.075e-7).epsilon(5e-4));
  // Small amplitude: the guaranteed ratio exceeds 1 and the bound is void.
  CHECK_FALSE(geometric_time_bound(3.0, 1.0, 0.1, 0.1).has_value());
}

TEST_CASE("time bounds need a blown-up run") {
  RunOutcome o;
  o.status = RunStatus::BudgetExhausted;
  CHECK_THROWS_AS((void)blowup_time_bounds(o, base(3, 1)), std::invalid_argument);

  o.status = RunStatus::BlewUp;
  o.initial_peak = 10.0;
  o.t_num_partial = 5.5e-3;
  const auto b = blowup_time_bounds(o, base(3, 1));
  CHECK(b.lower_ok);
  REQUIRE(b.upper_ok.has_value());
  CHECK(*b.upper_ok);
  CHECK(b.sandwich_ok);
  o.t_num_partial = 4e-3;
  CHECK_FALSE(blowup_time_bounds(o, base(3, 1)).sandwich_ok);
}

TEST_CASE("three-point regime on a coarse mesh") {
  const SimParams p = base(2.0, 1.0, 0.5);
  const auto r = run(p, InitialData::sine_bump());
  REQUIRE(r.outcome.status == RunStatus::BlewUp);
  const auto rep = classify_blowup_set(r.history, p);
  CHECK(rep.regime == Regime::ThreePoint);
  CHECK(rep.theory_applies);
  CHECK(rep.at(0).verdict == Verdict::BlowsUp);
  CHECK(rep.at(-1).verdict == Verdict::BlowsUp);
  CHECK(rep.at(1).verdict == Verdict::BlowsUp);
  CHECK(rep.at(-2).verdict == Verdict::Bounded);
  CHECK(rep.at(2).verdict == Verdict::Bounded);
  CHECK(rep.matches_theory());
  CHECK(rep.window_peak_growth >= kClassifierWindowGrowth);
}

TEST_CASE("classification preconditions") {
  const SimParams p = base(3.0, 1.0);
  CHECK_THROWS_AS((void)classify_blowup_set(RunHistory{}, p), std::invalid_argument);

  SimParams short_run = p;
  short_run.max_steps = 5;
  CHECK_THROWS_AS((void)classify_blowup_set(run(short_run, InitialData::sine_bump()).history, short_run),
                  std::invalid_argument);

  auto history = run(p, InitialData::sine_bump()).history;
  history.records[history.records.size() / 2].u_m_plus_1 *= 1.001;
  CHECK_THROWS_AS((void)classify_blowup_set(history, p), std::invalid_argument);
}

TEST_CASE("peak ratio limits in the single-point regime") {
  SimParams p = base(3.0, 1.2);
  p.h = terminal_spacing(p);
  const auto r = run(p, InitialData::sine_bump());
  const auto d = peak_ratio_diagnostics(r.history, p);
  REQUIRE(d.summary.applicable);
  CHECK_FALSE(d.summary.regrid_in_window);
  CHECK(d.summary.growth_target == doctest::Approx(1.1));
  CHECK(d.summary.ratio_a_target == doctest::Approx(1.0 / 1.1));
  CHECK(d.summary.passes());
  CHECK(d.steps.size() + 1 == r.history.records.size());
  for (const auto& s : d.steps) CHECK(s.a_n >= 0.0);
}

TEST_CASE("peak ratio limits are not claimed outside their regime") {
  const SimParams p = base(2.0, 1.0, 0.5);
  const auto d = peak_ratio_diagnostics(run(p, InitialData::sine_bump()).history, p);
  CHECK_FALSE(d.summary.applicable);
  CHECK_FALSE(d.summary.reason.empty());
  CHECK_FALSE(d.summary.passes());
}

TEST_CASE("order fit and nodal error") {
  const std::vector<double> h{0.1, 0.05, 0.025};
  std::vector<double> e2, e18;
  for (double v : h) {
    e2.push_back(3.0 * v * v);
    e18.push_back(0.7 * std::pow(v, 1.8));
  }
  CHECK(fit_order(h, e2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_order(h, e18) == doctest::Approx(1.8).epsilon(1e-12));

  const TimeSlice a{Grid::with_intervals(40), std::vector<double>(41, 1.0), 3};
  CHECK(max_nodal_error(a, a, 1) == 0.0);
  TimeSlice fine{Grid::with_intervals(80), std::vector<double>(81, 1.0), 3};
  fine.u[2] = 1.5;  // shared with level node 1
  fine.u[3] = 9.0;  // not shared
  CHECK(max_nodal_error(a, fine, 2) == doctest::Approx(0.5));
  const TimeSlice odd{Grid::with_intervals(60), std::vector<double>(61, 1.0), 3};
  CHECK_THROWS_AS((void)max_nodal_error(a, odd, 2), std::invalid_argument);
}

TEST_CASE("convergence study input checks") {
  const SimParams p = base(2.0, 1.0);
  const auto sine = InitialData::sine_bump();
  CHECK_THROWS_AS((void)convergence_study(p, sine, {0.1, 0.05}), std::invalid_argument);
  CHECK_THROWS_AS((void)convergence_study(p, sine, {0.1, 0.06, 0.03}), std::invalid_argument);
  ConvergenceOptions bad;
  bad.reference_factor = 2;
  CHECK_THROWS_AS((void)convergence_study(p, sine, {0.1, 0.05, 0.025}, bad), std::invalid_argument);
  ConvergenceOptions late;
  late.t_check = 1.0;
  CHECK_THROWS_AS((void)convergence_study(p, sine, {0.1, 0.05, 0.025}, late), std::runtime_error);
}

TEST_CASE("linear gradient convergence study") {
  const auto rep = convergence_study(base(2.0, 1.0), InitialData::sine_bump(), {0.1, 0.05, 0.025});
  CHECK(rep.study_case == ConvergenceCase::LinearGradient);
  CHECK(rep.last_index_offset == 1);
  CHECK(rep.reference_h == doctest::Approx(0.00625));
  REQUIRE(rep.levels.size() == 3);
  CHECK(rep.error_ratios.size() == 2);
  CHECK(rep.expected_order == 2.0);
  CHECK(rep.fitted_order > 1.5);
  for (const auto& l : rep.levels) CHECK(l.error > 0.0);
}
