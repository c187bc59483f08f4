#include "cwblowup/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace cwblowup {

namespace {

using nlohmann::json;

// JSON has no NaN/inf; map them to null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

void csv_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

json to_json(const SimParams& p) {
  return {{"p", p.p},
          {"q", p.q},
          {"tau", p.tau},
          {"h", p.h},
          {"lambda", p.lambda},
          {"blow_threshold", p.blow_threshold},
          {"max_steps", p.max_steps},
          {"picard_tol", p.picard_tol},
          {"picard_max_iters", p.picard_max_iters}};
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"message", c.message}});
  return {{"ok", r.ok()},
          {"checks", checks},
          {"warnings", r.warnings},
          {"regime", to_string(r.regime)},
          {"mesh_condition_three_point", r.mesh_condition_three_point}};
}

json to_json(const RunOutcome& o) {
  json j = {{"status", to_string(o.status)},
            {"T_num_partial", num(o.t_num_partial)},
            {"T_num_tail", num(o.t_num_tail)},
            {"n_final", o.n_final},
            {"t_final", num(o.final_state.t)},
            {"sup_norm_final", num(o.final_state.sup_norm())},
            {"final_intervals", o.final_intervals},
            {"initial_peak", num(o.initial_peak)},
            {"regrid_count", o.regrid_count}};
  if (o.error) {
    j["error"] = {{"kind", to_string(*o.error)}, {"message", o.message}};
  }
  return j;
}

json to_json(const BlowupReport& r) {
  json offsets = json::array();
  json evidence = json::object();
  for (const auto& e : r.offsets) {
    offsets.push_back({{"offset", e.offset},
                       {"verdict", to_string(e.verdict)},
                       {"expected", e.expected ? json(to_string(*e.expected)) : json(nullptr)}});
    evidence[std::to_string(e.offset)] = {{"basis", e.basis},
                                          {"final_value", num(e.final_value)},
                                          {"window_start_value", num(e.window_start_value)},
                                          {"relative_change", num(e.relative_change)},
                                          {"growth_ratio", num(e.growth_ratio)},
                                          {"increment_trend", num(e.increment_trend)}};
  }
  return {{"regime", to_string(r.regime)},
          {"theory_applies", r.theory_applies},
          {"matches_theory", r.matches_theory()},
          {"window", {{"start", r.window_start},
                      {"steps", r.window_steps},
                      {"peak_growth", num(r.window_peak_growth)},
                      {"regrid_in_window", r.regrid_in_window}}},
          {"offsets", offsets},
          {"evidence", evidence}};
}

json to_json(const TimeBounds& b) {
  return {{"T_num", num(b.t_num)},
          {"tail", num(b.tail)},
          {"g", num(b.g_lambda)},
          {"T_star_star", opt(b.t_star_star)},
          {"lower_ok", b.lower_ok},
          {"upper_ok", b.upper_ok ? json(*b.upper_ok) : json(nullptr)},
          {"sandwich_ok", b.sandwich_ok}};
}

json to_json(const PeakRatioSummary& s) {
  json j = {{"applicable", s.applicable},
            {"sup_u_m_minus_1", num(s.sup_u_m_minus_1)},
            {"sup_condition_threshold", num(s.sup_condition_threshold)},
            {"sup_condition_observed", s.sup_condition_observed}};
  if (!s.applicable) {
    j["reason"] = s.reason;
    return j;
  }
  j["window"] = s.window;
  j["growth_mean"] = num(s.growth_mean);
  j["growth_target"] = num(s.growth_target);
  j["growth_deviation"] = num(s.growth_deviation);
  j["ratio_a_mean"] = num(s.ratio_a_mean);
  j["ratio_a_target"] = num(s.ratio_a_target);
  j["ratio_a_deviation"] = num(s.ratio_a_deviation);
  j["decreasing_window"] = s.decreasing_window;
  j["a_strictly_decreasing"] = s.a_strictly_decreasing;
  j["regrid_in_window"] = s.regrid_in_window;
  j["passes"] = s.passes();
  return j;
}

json to_json(const ConvergenceReport& r) {
  json levels = json::array();
  json errors = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"h", num(l.h)}, {"intervals", l.intervals}, {"steps", l.steps}});
    errors.push_back(num(l.error));
  }
  json ratios = json::array();
  for (double v : r.error_ratios) ratios.push_back(num(v));
  return {{"case", to_string(r.study_case)},
          {"T_check", num(r.t_check)},
          {"reference_h", num(r.reference_h)},
          {"reference_intervals", r.reference_intervals},
          {"compared_nodes", "1..m-" + std::to_string(r.last_index_offset)},
          {"levels", levels},
          {"errors", errors},
          {"error_ratios", ratios},
          {"fitted_order", num(r.fitted_order)},
          {"expected_order", num(r.expected_order)}};
}

void write_history_csv(std::ostream& out, const RunHistory& history, std::string_view comment) {
  out << "# " << comment << '\n';
  out << "n,t,tau_n,h_n,sup_norm,u_m,u_m_minus_1,u_m_minus_2,u_m_plus_1,u_m_plus_2\n";
  for (const auto& r : history.records) {
    out << r.n << ',';
    csv_row(out, {r.t, r.tau_n, r.h_n, r.sup_norm, r.u_m, r.u_m_minus_1, r.u_m_minus_2, r.u_m_plus_1, r.u_m_plus_2});
  }
}

void write_snapshot_csv(std::ostream& out, const Snapshot& snapshot, std::string_view comment) {
  out << "# " << comment << ",n=" << snapshot.n << ",t=" << format_number(snapshot.t) << '\n';
  out << "x,u\n";
  for (std::size_t j = 0; j < snapshot.u.size(); ++j) csv_row(out, {snapshot.x[j], snapshot.u[j]});
}

void write_diagnostics_csv(std::ostream& out, const PeakRatioReport& report, std::string_view comment) {
  out << "# " << comment << '\n';
  out << "n,a_n,ratio_a,growth\n";
  for (const auto& d : report.steps) {
    out << d.n << ',';
    csv_row(out, {d.a_n, d.ratio_a, d.growth});
  }
}

}  // namespace cwblowup
