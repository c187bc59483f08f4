#include "cwblowup/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cwblowup {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSymmetryTol = 1e-10;

void require_symmetric(const RunHistory& history) {
  for (const auto& r : history.records) {
    for (int k = 1; k <= 2; ++k) {
      const double left = r.at_offset(-k);
      const double right = r.at_offset(k);
      if (std::isnan(left) && std::isnan(right)) continue;
      if (!(std::abs(left - right) <= kSymmetryTol * std::max(1.0, std::abs(left)))) {
        throw std::invalid_argument("classify_blowup_set: history is not symmetric at step " + std::to_string(r.n));
      }
    }
  }
}

std::array<std::optional<Verdict>, 5> expected_verdicts(Regime regime, bool theory_applies) {
  std::array<std::optional<Verdict>, 5> e{};
  e[2] = Verdict::BlowsUp;
  if (!theory_applies) return e;
  if (regime == Regime::ThreePoint) {
    e[1] = e[3] = Verdict::BlowsUp;
    e[0] = e[4] = Verdict::Bounded;
  } else if (regime == Regime::SinglePoint) {
    e[0] = e[1] = e[3] = e[4] = Verdict::Bounded;
  }
  return e;
}

OffsetEvidence examine_offset(const RunHistory& history, std::size_t start, int offset, double peak_growth,
                              bool regrid_in_window, const SimParams& params) {
  const auto& recs = history.records;
  const std::size_t last = recs.size() - 1;
  const std::size_t steps = last - start;

  OffsetEvidence ev;
  ev.offset = offset;
  ev.final_value = recs[last].at_offset(offset);
  ev.window_start_value = recs[start].at_offset(offset);
  if (std::isnan(ev.final_value) || std::isnan(ev.window_start_value)) {
    ev.basis = "off_grid";
    ev.relative_change = ev.growth_ratio = ev.increment_trend = kNaN;
    return ev;
  }

  const double v0 = ev.window_start_value;
  const double v1 = ev.final_value;
  ev.relative_change = v0 != 0.0 ? std::abs(v1 - v0) / std::abs(v0) : (v1 == 0.0 ? 0.0 : kInf);
  if (steps == 0) {
    ev.growth_ratio = 1.0;
  } else if (v0 > 0.0) {
    ev.growth_ratio = std::pow(v1 / v0, 1.0 / static_cast<double>(steps));
  } else {
    ev.growth_ratio = v1 > 0.0 ? kInf : 1.0;
  }

  bool all_positive = steps > 1;
  double first = 0.0;
  double second = 0.0;
  const std::size_t half = steps / 2;
  for (std::size_t k = start; k < last; ++k) {
    const double d = recs[k + 1].at_offset(offset) - recs[k].at_offset(offset);
    all_positive = all_positive && d > 0.0;
    (k - start < half ? first : second) += d;
  }
  if (half > 0 && steps > half) {
    const double m1 = first / static_cast<double>(half);
    const double m2 = second / static_cast<double>(steps - half);
    ev.increment_trend = m1 > 0.0 ? m2 / m1 : (m2 > 0.0 ? kInf : 0.0);
  } else {
    ev.increment_trend = kNaN;
  }

  if (offset != 0 && regrid_in_window) {
    ev.verdict = Verdict::Undetermined;
    ev.basis = "regrid_in_window";
    return ev;
  }
  const bool hundredfold = peak_growth >= kClassifierWindowGrowth;
  if (v1 > std::sqrt(params.blow_threshold) && ev.growth_ratio > 1.0 + params.tau / 2.0) {
    ev.verdict = Verdict::BlowsUp;
    ev.basis = "geometric";
  } else if (hundredfold && ev.relative_change < kBoundedDrift) {
    ev.verdict = Verdict::Bounded;
    ev.basis = "saturated";
  } else if (hundredfold && all_positive && ev.increment_trend >= 0.5) {
    ev.verdict = Verdict::BlowsUp;
    ev.basis = "non_summable_increments";
  } else {
    ev.verdict = Verdict::Undetermined;
    ev.basis = "inconclusive";
  }
  return ev;
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::BlowsUp: return "BlowsUp";
    case Verdict::Bounded: return "Bounded";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

bool BlowupReport::matches_theory() const {
  return std::all_of(offsets.begin(), offsets.end(),
                     [](const OffsetEvidence& e) { return !e.expected || *e.expected == e.verdict; });
}

BlowupReport classify_blowup_set(const RunHistory& history, const SimParams& params) {
  const auto& recs = history.records;
  if (recs.empty()) throw std::invalid_argument("classify_blowup_set: empty history");
  if (recs.back().sup_norm < params.blow_threshold) {
    throw std::invalid_argument("classify_blowup_set: run did not reach blow_threshold");
  }
  require_symmetric(history);

  BlowupReport report;
  report.regime = classify_regime(params.p, params.q);
  report.theory_applies = report.regime == Regime::SinglePoint ||
                          (report.regime == Regime::ThreePoint && params.h < 1.0 / (1.0 + params.tau));

  const std::size_t last = recs.size() - 1;
  const double target = recs[last].u_m / kClassifierWindowGrowth;
  std::size_t start = 0;
  for (std::size_t i = last; i-- > 0;) {
    if (recs[i].u_m <= target) {
      start = i;
      break;
    }
  }
  report.window_start = start;
  report.window_steps = last - start;
  report.window_peak_growth = recs[last].u_m / recs[start].u_m;
  for (std::size_t i = start + 1; i <= last; ++i) report.regrid_in_window = report.regrid_in_window || recs[i].regridded;

  const auto expected = expected_verdicts(report.regime, report.theory_applies);
  for (int offset = -2; offset <= 2; ++offset) {
    auto& ev = report.offsets[static_cast<std::size_t>(offset + 2)];
    ev = examine_offset(history, start, offset, report.window_peak_growth, report.regrid_in_window, params);
    ev.expected = expected[static_cast<std::size_t>(offset + 2)];
  }
  // The stop condition is the peak crossing blow_threshold.
  auto& peak = report.offsets[2];
  peak.verdict = Verdict::BlowsUp;
  if (peak.basis != "geometric") peak.basis = "stop_condition";
  return report;
}

bool PeakRatioSummary::passes(double growth_tol, double ratio_tol) const {
  return applicable && growth_deviation < growth_tol && ratio_a_deviation < ratio_tol && a_strictly_decreasing;
}

PeakRatioReport peak_ratio_diagnostics(const RunHistory& history, const SimParams& params, std::size_t window,
                                  std::size_t decreasing_window) {
  const auto& recs = history.records;
  if (recs.empty()) throw std::invalid_argument("peak_ratio_diagnostics: empty history");
  PeakRatioReport out;
  out.steps.reserve(recs.size() - 1);
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double a0 = recs[i].u_m_minus_1 / recs[i].u_m;
    const double a1 = recs[i + 1].u_m_minus_1 / recs[i + 1].u_m;
    out.steps.push_back({recs[i].n, a0, a1 / a0, recs[i + 1].u_m / recs[i].u_m, recs[i + 1].regridded});
  }

  auto& s = out.summary;
  s.growth_target = 1.0 + params.tau;
  s.ratio_a_target = 1.0 / (1.0 + params.tau);
  for (const auto& r : recs) {
    if (!std::isnan(r.u_m_minus_1)) s.sup_u_m_minus_1 = std::max(s.sup_u_m_minus_1, r.u_m_minus_1);
  }
  const double h_final = recs.back().h_n;
  s.sup_condition_threshold = 3.0 * (1.0 + params.tau) / (h_final * h_final);
  s.sup_condition_observed = s.sup_u_m_minus_1 > s.sup_condition_threshold;

  if (classify_regime(params.p, params.q) != Regime::SinglePoint) {
    s.reason = "limits hold only for p > 2 and q < 2(p-1)/p";
    return out;
  }
  if (recs.back().sup_norm < params.blow_threshold) {
    s.reason = "run did not reach blow_threshold";
    return out;
  }
  if (out.steps.empty() || window == 0) {
    s.reason = "no steps to summarise";
    return out;
  }

  s.applicable = true;
  s.window = std::min(window, out.steps.size());
  const auto first = out.steps.end() - static_cast<std::ptrdiff_t>(s.window);
  double g = 0.0;
  double ra = 0.0;
  for (auto it = first; it != out.steps.end(); ++it) {
    g += it->growth;
    ra += it->ratio_a;
    s.regrid_in_window = s.regrid_in_window || it->regridded;
  }
  s.growth_mean = g / static_cast<double>(s.window);
  s.ratio_a_mean = ra / static_cast<double>(s.window);
  s.growth_deviation = std::abs(s.growth_mean - s.growth_target) / s.growth_target;
  s.ratio_a_deviation = std::abs(s.ratio_a_mean - s.ratio_a_target) / s.ratio_a_target;

  s.decreasing_window = std::min(decreasing_window, out.steps.size());
  s.a_strictly_decreasing =
      std::all_of(out.steps.end() - static_cast<std::ptrdiff_t>(s.decreasing_window), out.steps.end(),
                  [](const StepDiagnostics& d) { return d.ratio_a < 1.0; });
  return out;
}

double souplet_weissler_lower_bound(double p, double peak) { return 1.0 / ((p - 1.0) * std::pow(peak, p - 1.0)); }

std::optional<double> geometric_time_bound(double p, double q, double tau, double peak) {
  if (!(q < 2.0)) return std::nullopt;
  const double exponent = (-2.0 * p + q * (1.0 + p)) / (2.0 - q);
  const double loss = tau * std::pow(2.0, -q / (2.0 - q)) * std::pow(peak, exponent);
  const double ratio = std::pow((1.0 + loss) / (1.0 + tau), p - 1.0);
  if (!(ratio < 1.0)) return std::nullopt;
  return tau / std::pow(peak, p - 1.0) / (1.0 - ratio);
}

TimeBounds blowup_time_bounds(const RunOutcome& outcome, const SimParams& params) {
  if (outcome.status != RunStatus::BlewUp) {
    throw std::invalid_argument("blowup_time_bounds: run did not blow up");
  }
  TimeBounds b;
  b.t_num = outcome.t_num_partial;
  b.tail = outcome.t_num_tail;
  b.g_lambda = souplet_weissler_lower_bound(params.p, outcome.initial_peak);
  b.t_star_star = geometric_time_bound(params.p, params.q, params.tau, outcome.initial_peak);
  const double total = b.t_num + b.tail;
  b.lower_ok = b.g_lambda <= total;
  if (b.t_star_star) b.upper_ok = total <= *b.t_star_star;
  b.sandwich_ok = b.lower_ok && b.upper_ok.value_or(false);
  return b;
}

const char* to_string(ConvergenceCase c) {
  switch (c) {
    case ConvergenceCase::SinglePoint: return "single_point";
    case ConvergenceCase::LinearGradient: return "linear_gradient";
    case ConvergenceCase::Uncovered: return "uncovered";
  }
  return "uncovered";
}

double max_nodal_error(const TimeSlice& level, const TimeSlice& reference, int last_index_offset) {
  const int k_level = level.grid.intervals();
  const int k_ref = reference.grid.intervals();
  if (k_ref < k_level || k_ref % k_level != 0) {
    throw std::invalid_argument("max_nodal_error: grids with K=" + std::to_string(k_level) + " and K=" +
                                std::to_string(k_ref) + " are not nested");
  }
  const int stride = k_ref / k_level;
  const int last = level.grid.middle() - last_index_offset;
  double worst = 0.0;
  for (int j = 1; j <= last; ++j) {
    const double diff = level.u[static_cast<std::size_t>(j)] - reference.u[static_cast<std::size_t>(j * stride)];
    worst = std::max(worst, std::abs(diff));
  }
  return worst;
}

double fit_order(std::span<const double> h, std::span<const double> errors) {
  if (h.size() != errors.size() || h.size() < 2) throw std::invalid_argument("fit_order: need matching samples");
  const auto n = static_cast<double>(h.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(errors[i] > 0.0)) return kNaN;
    mx += std::log(h[i]);
    my += std::log(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceReport convergence_study(const SimParams& params, const InitialData& initial,
                                    const std::vector<double>& grid_levels, const ConvergenceOptions& options) {
  if (grid_levels.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 grid levels");
  for (std::size_t k = 1; k < grid_levels.size(); ++k) {
    if (std::abs(grid_levels[k] - grid_levels[k - 1] / 2.0) > 1e-9 * grid_levels[k - 1]) {
      throw std::invalid_argument("convergence_study: each level must halve the previous spacing");
    }
  }
  if (options.reference_factor < 4) throw std::invalid_argument("convergence_study: reference_factor must be >= 4");

  ConvergenceReport report;
  if (params.q == 1.0) {
    report.study_case = ConvergenceCase::LinearGradient;
    report.last_index_offset = 1;
    report.expected_order = 2.0;
  } else if (classify_regime(params.p, params.q) == Regime::SinglePoint) {
    report.study_case = ConvergenceCase::SinglePoint;
    report.last_index_offset = 2;
    report.expected_order = 3.0 - params.q;
  } else {
    report.study_case = ConvergenceCase::Uncovered;
    report.last_index_offset = 2;
    report.expected_order = kNaN;
  }

  auto with_h = [&](double h) {
    SimParams p = params;
    p.h = h;
    return p;
  };

  if (options.t_check) {
    report.t_check = *options.t_check;
  } else {
    const RunResult coarse = run(with_h(grid_levels.front()), initial);
    if (coarse.outcome.status != RunStatus::BlewUp) {
      throw std::runtime_error("convergence_study: coarsest level did not blow up; pass t_check explicitly");
    }
    report.t_check = 0.5 * coarse.outcome.t_num_partial;
  }
  if (!(report.t_check > 0.0)) throw std::invalid_argument("convergence_study: t_check must be positive");

  report.reference_h = grid_levels.back() / options.reference_factor;
  const double t_check = report.t_check;
  auto reference_job = std::async(std::launch::async, [&] { return advance_to(with_h(report.reference_h), initial, t_check); });
  std::vector<std::future<TimeSlice>> jobs;
  for (double h : grid_levels) {
    jobs.push_back(std::async(std::launch::async, [&, h] { return advance_to(with_h(h), initial, t_check); }));
  }
  const TimeSlice reference = reference_job.get();
  report.reference_intervals = reference.grid.intervals();

  std::vector<double> hs;
  std::vector<double> errs;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const TimeSlice slice = jobs[k].get();
    ConvergenceLevel level;
    level.h = slice.grid.spacing();
    level.intervals = slice.grid.intervals();
    level.steps = slice.steps;
    level.error = max_nodal_error(slice, reference, report.last_index_offset);
    hs.push_back(level.h);
    errs.push_back(level.error);
    report.levels.push_back(level);
  }
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) report.error_ratios.push_back(errs[k] / errs[k + 1]);
  report.fitted_order = fit_order(hs, errs);
  return report;
}

}  // namespace cwblowup
