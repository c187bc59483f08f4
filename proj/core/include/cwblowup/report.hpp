#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "cwblowup/analysis.hpp"
#include "cwblowup/params.hpp"
#include "cwblowup/simulator.hpp"

namespace cwblowup {

/// Shortest decimal form that round-trips ('.' separator, "nan"/"inf" for
/// non-finite values).
[[nodiscard]] std::string format_number(double value);

[[nodiscard]] nlohmann::json to_json(const SimParams& params);
[[nodiscard]] nlohmann::json to_json(const ValidationReport& report);
[[nodiscard]] nlohmann::json to_json(const RunOutcome& outcome);
[[nodiscard]] nlohmann::json to_json(const BlowupReport& report);
[[nodiscard]] nlohmann::json to_json(const TimeBounds& bounds);
[[nodiscard]] nlohmann::json to_json(const PeakRatioSummary& summary);
[[nodiscard]] nlohmann::json to_json(const ConvergenceReport& report);

/// Columns n,t,tau_n,h_n,sup_norm,u_m,u_m_minus_1,u_m_minus_2,u_m_plus_1,
/// u_m_plus_2, preceded by "# <comment>".
void write_history_csv(std::ostream& out, const RunHistory& history, std::string_view comment);
/// Columns x,u, preceded by "# <comment>".
void write_snapshot_csv(std::ostream& out, const Snapshot& snapshot, std::string_view comment);
/// Columns n,a_n,ratio_a,growth.
void write_diagnostics_csv(std::ostream& out, const PeakRatioReport& report, std::string_view comment);

}  // namespace cwblowup
