#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "cwblowup/config.hpp"
#include "cwblowup/report.hpp"

using namespace cwblowup;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cwblowup_config_test";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("config text") {
  const auto c = parse_config(
      "# comment line\n"
      "p = 2\n"
      "q=1   # trailing comment\n"
      "\n"
      "tau=0.05\r\n"
      "h=0.5\n"
      "lambda=1e3\n"
      "blow_threshold=1e10\n"
      "max_steps=5000\n"
      "picard_tol=1e-13\n"
      "picard_max_iters=20\n"
      "initial=sine\n");
  CHECK(c.params.p == 2.0);
  CHECK(c.params.q == 1.0);
  CHECK(c.params.tau == 0.05);
  CHECK(c.params.h == 0.5);
  CHECK(c.params.lambda == 1000.0);
  CHECK(c.params.blow_threshold == 1e10);
  CHECK(c.params.max_steps == 5000);
  CHECK(c.params.picard_tol == 1e-13);
  CHECK(c.params.picard_max_iters == 20);
  CHECK(c.initial == "sine");

  const auto empty = parse_config("");
  CHECK(empty.params.p == SimParams{}.p);
  CHECK(empty.initial == "sine");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS((void)parse_config("nonsense=1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("p=three\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("p=3x\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("p\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("p=\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("max_steps=1.5\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("initial=gauss\n"), ConfigError);
  CHECK_THROWS_AS((void)load_config(scratch_dir() / "does_not_exist.cfg"), ConfigError);
}

TEST_CASE("overrides") {
  RunConfig c;
  apply_override(c, "lambda=100");
  apply_override(c, " q = 1.2 ");
  CHECK(c.params.lambda == 100.0);
  CHECK(c.params.q == 1.2);
  CHECK_THROWS_AS(apply_override(c, "speed=3"), ConfigError);
}

TEST_CASE("description lists every resolved parameter") {
  RunConfig c;
  CHECK(describe(c) ==
        "p=3,q=1,tau=0.1,h=0.05,lambda=10,blow_threshold=1e+12,max_steps=1000000,picard_tol=1e-12,"
        "picard_max_iters=50,initial=sine");
}

TEST_CASE("initial data from CSV") {
  const fs::path dir = scratch_dir();
  write_file(dir / "tent.csv", "# tent\nx,u0\n-1,0\n-0.5,10\n0,20\n0.5,10\n1,0\n");
  const auto d = load_initial_csv(dir / "tent.csv");
  CHECK(d.kind() == InitialKind::Custom);
  CHECK(d.peak(0.0) == 20.0);

  RunConfig c;
  c.initial = "file:tent.csv";
  CHECK(resolve_initial(c, dir).peak(0.0) == 20.0);

  write_file(dir / "lopsided.csv", "-1,0\n-0.5,10\n0,20\n0.5,5\n1,0\n");
  CHECK_THROWS_AS((void)load_initial_csv(dir / "lopsided.csv"), ConfigError);
  write_file(dir / "broken.csv", "-1,0\nzero,20\n1,0\n");
  CHECK_THROWS_AS((void)load_initial_csv(dir / "broken.csv"), ConfigError);
  CHECK_THROWS_AS((void)load_initial_csv(dir / "missing.csv"), ConfigError);
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e12) == "1e+12");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  for (double v : {1.0 / 3.0, 5.761919003518116e-07, 123456.789, 1e-300}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("JSON reports") {
  RunOutcome o;
  o.status = RunStatus::BlewUp;
  o.t_num_partial = 0.25;
  o.final_state.u = {0, 1, 0};
  const auto j = to_json(o);
  CHECK(j["status"] == "BlewUp");
  CHECK(j["T_num_partial"] == 0.25);
  CHECK_FALSE(j.contains("error"));
  o.status = RunStatus::SolverError;
  o.error = StepErrorKind::Stiff;
  o.message = "boom";
  CHECK(to_json(o)["error"]["kind"] == "stiff");

  TimeBounds b;
  b.t_num = 1.0;
  const auto tb = to_json(b);
  CHECK(tb["T_star_star"].is_null());
  CHECK(tb["upper_ok"].is_null());
  CHECK(tb.contains("g"));

  PeakRatioSummary s;
  s.reason = "not a blow-up run";
  s.sup_u_m_minus_1 = std::numeric_limits<double>::quiet_NaN();
  const auto sj = to_json(s);
  CHECK(sj["applicable"] == false);
  CHECK(sj["sup_u_m_minus_1"].is_null());

  const auto pj = to_json(SimParams{});
  CHECK(pj["max_steps"] == 1000000);
}

TEST_CASE("history CSV layout") {
  RunHistory h;
  HistoryRecord r;
  r.n = 0;
  r.t = 0.0;
  r.u_m_minus_2 = std::numeric_limits<double>::quiet_NaN();
  h.records.push_back(r);
  std::ostringstream out;
  write_history_csv(out, h, "p=3");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# p=3");
  std::getline(in, line);
  CHECK(line == "n,t,tau_n,h_n,sup_norm,u_m,u_m_minus_1,u_m_minus_2,u_m_plus_1,u_m_plus_2");
  std::getline(in, line);
  CHECK(line == "0,0,0,0,0,0,0,nan,0,0");
}
