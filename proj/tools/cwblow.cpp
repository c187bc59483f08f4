// cwblow: command-line front end for the blow-up solver.
//
// Exit codes: 0 ok, 2 configuration or validation error, 3 solver error or a
// run that cannot support the requested report, 4 diagnostics check failed.

#include <charconv>
#include <cstdio>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwblowup/analysis.hpp"
#include "cwblowup/config.hpp"
#include "cwblowup/grid.hpp"
#include "cwblowup/report.hpp"
#include "cwblowup/simulator.hpp"

namespace fs = std::filesystem;
using namespace cwblowup;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct CommonOptions {
  std::string config_path;
  std::string output_dir = "out";
  std::vector<std::string> overrides;
};

struct Context {
  RunConfig config;
  InitialData initial = InitialData::sine_bump();
  fs::path out;
};

// Distinguishes "bad input" from "the solver gave up" on the way out of a verb.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Context prepare(const CommonOptions& opts) {
  Context ctx;
  fs::path base;
  if (!opts.config_path.empty()) {
    ctx.config = load_config(opts.config_path);
    base = fs::path(opts.config_path).parent_path();
  }
  for (const auto& o : opts.overrides) apply_override(ctx.config, o);
  const auto report = validate(ctx.config.params);
  if (!report.ok()) throw ConfigError(report.failure_summary());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  ctx.initial = resolve_initial(ctx.config, base);
  for (const auto& w : ctx.initial.warnings()) std::cerr << "warning: " << w << '\n';

  const char* env = std::getenv("CW_OUTPUT_DIR");
  ctx.out = (env != nullptr && *env != '\0') ? fs::path(env) : fs::path(opts.output_dir);
  fs::create_directories(ctx.out);
  return ctx;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << std::setw(2) << j << '\n';
}

RunResult run_checked(const SimParams& params, const InitialData& initial, const RunOptions& options = {}) {
  try {
    return run(params, initial, options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void write_history(const fs::path& dir, const RunResult& r, const std::string& comment) {
  auto f = open_out(dir / "history.csv");
  write_history_csv(f, r.history, comment);
}

void write_snapshots(const fs::path& dir, const RunResult& r, const std::string& comment) {
  const fs::path snap_dir = dir / "snapshots";
  fs::remove_all(snap_dir);
  if (r.history.snapshots.empty()) return;
  fs::create_directories(snap_dir);
  for (const auto& s : r.history.snapshots) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(7) << std::setfill('0') << s.n << ".csv";
    auto f = open_out(snap_dir / name.str());
    write_snapshot_csv(f, s, comment);
  }
}

int finish_run(const RunResult& r) {
  if (r.outcome.status == RunStatus::SolverError) {
    std::cerr << "solver error: " << r.outcome.message << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_run(const Context& ctx, std::int64_t snapshot_every) {
  RunOptions options;
  options.snapshot_every = snapshot_every;
  const auto r = run_checked(ctx.config.params, ctx.initial, options);
  const std::string comment = describe(ctx.config);
  write_history(ctx.out, r, comment);
  write_snapshots(ctx.out, r, comment);
  auto j = to_json(r.outcome);
  j["params"] = to_json(ctx.config.params);
  j["initial"] = ctx.config.initial;
  write_json(ctx.out / "outcome.json", j);
  std::cout << "status " << to_string(r.outcome.status) << ", steps " << r.outcome.n_final << ", T_num "
            << format_number(r.outcome.t_num_partial + r.outcome.t_num_tail) << '\n';
  return finish_run(r);
}

int cmd_classify(const Context& ctx) {
  const auto r = run_checked(ctx.config.params, ctx.initial);
  write_history(ctx.out, r, describe(ctx.config));
  if (r.outcome.status != RunStatus::BlewUp) {
    std::cerr << "cannot classify: run ended with status " << to_string(r.outcome.status);
    if (!r.outcome.message.empty()) std::cerr << " (" << r.outcome.message << ')';
    std::cerr << '\n';
    return kExitSolver;
  }
  const auto report = classify_blowup_set(r.history, ctx.config.params);
  auto j = to_json(report);
  j["params"] = to_json(ctx.config.params);
  write_json(ctx.out / "blowup_report.json", j);
  for (const auto& e : report.offsets) {
    std::cout << "offset " << std::showpos << e.offset << std::noshowpos << ": " << to_string(e.verdict);
    if (e.expected) std::cout << " (expected " << to_string(*e.expected) << ')';
    std::cout << " [" << e.basis << "]\n";
  }
  return kExitOk;
}

int cmd_time_table(const Context& ctx, const std::vector<double>& lambdas) {
  std::vector<SimParams> rows;
  for (double l : lambdas) {
    SimParams p = ctx.config.params;
    p.lambda = l;
    rows.push_back(p);
  }
  // Rows that fail validation are reported in place instead of run.
  std::vector<std::optional<std::string>> invalid(rows.size());
  std::vector<SimParams> runnable;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = validate(rows[i]);
    if (!v.ok() || ctx.initial.peak(rows[i].lambda) <= 1.0) {
      invalid[i] = v.ok() ? "initial peak must exceed 1" : v.failure_summary();
    } else {
      runnable.push_back(rows[i]);
    }
  }
  const auto results = run_many(runnable, ctx.initial);

  auto f = open_out(ctx.out / "time_table.csv");
  f << "# " << describe(ctx.config) << '\n';
  f << "lambda,g_lambda,T_num,tail,T_star_star,sandwich_ok,status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SimParams& p = rows[i];
    const double g = p.lambda > 0 ? souplet_weissler_lower_bound(p.p, p.lambda) : nan;
    f << format_number(p.lambda) << ',' << format_number(g) << ',';
    if (invalid[i]) {
      f << "nan,nan,nan,false,invalid\n";
      std::cerr << "lambda " << format_number(p.lambda) << ": " << *invalid[i] << '\n';
      continue;
    }
    const RunOutcome& o = results[k++].outcome;
    if (o.status != RunStatus::BlewUp) {
      f << format_number(o.t_num_partial) << ",nan,nan,false," << to_string(o.status) << '\n';
      continue;
    }
    const auto b = blowup_time_bounds(o, p);
    f << format_number(b.t_num) << ',' << format_number(b.tail) << ','
      << format_number(b.t_star_star.value_or(nan)) << ',' << (b.sandwich_ok ? "true" : "false") << ','
      << to_string(o.status) << '\n';
  }
  std::cout << "wrote " << (ctx.out / "time_table.csv").string() << " (" << rows.size() << " rows)\n";
  return kExitOk;
}

int cmd_converge(const Context& ctx, const std::vector<double>& levels, std::optional<double> t_check) {
  ConvergenceOptions options;
  options.t_check = t_check;
  ConvergenceReport report;
  try {
    report = convergence_study(ctx.config.params, ctx.initial, levels, options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::runtime_error& e) {
    throw SolverFailure(e.what());
  }
  auto j = to_json(report);
  j["params"] = to_json(ctx.config.params);
  write_json(ctx.out / "convergence.json", j);
  auto f = open_out(ctx.out / "convergence.csv");
  f << "# " << describe(ctx.config) << ",T_check=" << format_number(report.t_check) << '\n';
  f << "h,intervals,steps,error\n";
  for (const auto& l : report.levels) {
    f << format_number(l.h) << ',' << l.intervals << ',' << l.steps << ',' << format_number(l.error) << '\n';
  }
  std::cout << "case " << to_string(report.study_case) << ", fitted order " << format_number(report.fitted_order)
            << ", expected " << format_number(report.expected_order) << '\n';
  return kExitOk;
}

int cmd_diagnostics(const Context& ctx) {
  const auto r = run_checked(ctx.config.params, ctx.initial);
  if (r.outcome.status == RunStatus::SolverError) return finish_run(r);
  const auto diag = peak_ratio_diagnostics(r.history, ctx.config.params);
  auto j = to_json(diag.summary);
  j["params"] = to_json(ctx.config.params);
  j["status"] = to_string(r.outcome.status);
  write_json(ctx.out / "diagnostics.json", j);
  auto f = open_out(ctx.out / "diagnostics.csv");
  write_diagnostics_csv(f, diag, describe(ctx.config));
  const auto& s = diag.summary;
  if (!s.applicable) {
    std::cout << "limits not checked: " << s.reason << '\n';
    return kExitOk;
  }
  std::cout << "growth mean " << format_number(s.growth_mean) << " (target " << format_number(s.growth_target)
            << "), ratio mean " << format_number(s.ratio_a_mean) << " (target " << format_number(s.ratio_a_target)
            << "), a_n decreasing " << (s.a_strictly_decreasing ? "yes" : "no") << '\n';
  if (!s.passes()) {
    std::cerr << "diagnostics check failed\n";
    return kExitCheck;
  }
  return kExitOk;
}

// Time series of the tracked nodes, one file per scenario.
void write_series(const fs::path& path, const RunResult& r, const std::string& comment,
                  const std::vector<int>& offsets) {
  auto f = open_out(path);
  f << "# " << comment << '\n';
  f << "n,t";
  for (int k : offsets) {
    f << ",u_m";
    if (k < 0) f << "_minus_" << -k;
    if (k > 0) f << "_plus_" << k;
  }
  f << '\n';
  for (const auto& rec : r.history.records) {
    f << rec.n << ',' << format_number(rec.t);
    for (int k : offsets) f << ',' << format_number(rec.at_offset(k));
    f << '\n';
  }
}

int cmd_figures(const Context& ctx, const std::vector<double>& lambdas) {
  int status = kExitOk;
  auto scenario = [&](double p, double q, std::optional<double> h) {
    RunConfig c = ctx.config;
    c.params.p = p;
    c.params.q = q;
    c.params.h = h ? *h : terminal_spacing(c.params);
    return c;
  };

  // Peak region of the single-point regime; the grid is fixed by starting at
  // the spacing the adaptive rule would reach at the threshold.
  {
    const RunConfig c = scenario(4.0, 1.3, std::nullopt);
    const auto r = run_checked(c.params, ctx.initial);
    write_series(ctx.out / "figure1.csv", r, describe(c), {-2, -1, 0, 1, 2});
    status = std::max(status, finish_run(r));
  }
  // Three-point regime on a coarse mesh (h < 1/(1 + tau)).
  {
    const RunConfig c = scenario(2.0, 1.0, 0.5);
    const auto r = run_checked(c.params, ctx.initial);
    write_series(ctx.out / "figure2.csv", r, describe(c), {0, -1});
    write_series(ctx.out / "figure3.csv", r, describe(c), {0, -2});
    status = std::max(status, finish_run(r));
  }
  // Lower bound g(lambda) against the numerical blow-up time, p = 3.
  {
    RunConfig c = ctx.config;
    c.params.p = 3.0;
    std::vector<SimParams> rows;
    for (double l : lambdas) {
      SimParams p = c.params;
      p.lambda = l;
      const auto v = validate(p);
      if (!v.ok()) throw ConfigError("lambda " + format_number(l) + ": " + v.failure_summary());
      rows.push_back(p);
    }
    const auto results = run_many(rows, ctx.initial);
    auto f = open_out(ctx.out / "figure4.csv");
    f << "# " << describe(c) << '\n';
    f << "lambda,g_lambda,T_num\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& o = results[i].outcome;
      const double t = o.status == RunStatus::BlewUp ? o.t_num_partial + o.t_num_tail
                                                    : std::numeric_limits<double>::quiet_NaN();
      f << format_number(rows[i].lambda) << ',' << format_number(souplet_weissler_lower_bound(3.0, rows[i].lambda))
        << ',' << format_number(t) << '\n';
      status = std::max(status, finish_run(results[i]));
    }
  }
  std::cout << "wrote figure1.csv .. figure4.csv to " << ctx.out.string() << '\n';
  return status;
}

// Comma-separated numbers; an empty string is an empty list.
std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    double v = 0.0;
    const char* first = item.data() + b;
    const char* last = item.data() + e + 1;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ConfigError(std::string("bad number in ") + what + ": '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("-c,--config", opts.config_path, "key=value configuration file");
  sub->add_option("-o,--output-dir", opts.output_dir, "output directory (CW_OUTPUT_DIR takes precedence)");
  sub->add_option("-s,--set", opts.overrides, "override a configuration key, e.g. --set lambda=100")
      ->take_all()
      ->allow_extra_args();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive finite-difference solver for u_t = u_xx + u^p - |u_x|^q with blow-up analysis"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::int64_t snapshot_every = 0;
  std::string lambdas = "10,100,1000,10000,100000";
  std::string levels = "0.1,0.05,0.025";
  std::optional<double> t_check;

  auto* run_cmd = app.add_subcommand("run", "simulate until blow-up; writes history.csv, snapshots/, outcome.json");
  add_common(run_cmd, opts);
  run_cmd->add_option("--snapshot-every", snapshot_every, "full profile every N steps (0 = off)")
      ->check(CLI::NonNegativeNumber);

  auto* classify_cmd = app.add_subcommand("classify", "classify the blow-up set; writes blowup_report.json");
  add_common(classify_cmd, opts);

  auto* table_cmd = app.add_subcommand("time-table", "blow-up time against its bounds; writes time_table.csv");
  add_common(table_cmd, opts);
  table_cmd->add_option("--lambdas", lambdas, "comma-separated initial amplitudes");

  auto* conv_cmd = app.add_subcommand("converge", "grid refinement study; writes convergence.json/.csv");
  add_common(conv_cmd, opts);
  conv_cmd->add_option("--levels", levels, "comma-separated grid spacings, each half the previous");
  conv_cmd->add_option("--t-check", t_check, "comparison time (default: half the coarse blow-up time)");

  auto* diag_cmd = app.add_subcommand("diagnostics", "peak-ratio limits; writes diagnostics.json/.csv");
  add_common(diag_cmd, opts);

  auto* fig_cmd = app.add_subcommand("figures", "time series for the blow-up scenarios; writes figure1..4.csv");
  add_common(fig_cmd, opts);
  fig_cmd->add_option("--lambdas", lambdas, "comma-separated amplitudes for the blow-up time curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Context ctx = prepare(opts);
    if (*run_cmd) return cmd_run(ctx, snapshot_every);
    if (*classify_cmd) return cmd_classify(ctx);
    if (*table_cmd) return cmd_time_table(ctx, parse_list(lambdas, "--lambdas"));
    if (*conv_cmd) return cmd_converge(ctx, parse_list(levels, "--levels"), t_check);
    if (*diag_cmd) return cmd_diagnostics(ctx);
    if (*fig_cmd) return cmd_figures(ctx, parse_list(lambdas, "--lambdas"));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverFailure& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}
