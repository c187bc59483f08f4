#include "cwblowup/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "cwblowup/report.hpp"

namespace cwblowup {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("cannot parse value '" + std::string(text) + "' for key '" + std::string(key) + "'");
  }
  return value;
}

void assign(RunConfig& config, std::string_view key, std::string_view value) {
  auto& p = config.params;
  if (key == "p") p.p = parse_number<double>(key, value);
  else if (key == "q") p.q = parse_number<double>(key, value);
  else if (key == "tau") p.tau = parse_number<double>(key, value);
  else if (key == "h") p.h = parse_number<double>(key, value);
  else if (key == "lambda") p.lambda = parse_number<double>(key, value);
  else if (key == "blow_threshold") p.blow_threshold = parse_number<double>(key, value);
  else if (key == "max_steps") p.max_steps = parse_number<std::int64_t>(key, value);
  else if (key == "picard_tol") p.picard_tol = parse_number<double>(key, value);
  else if (key == "picard_max_iters") p.picard_max_iters = parse_number<int>(key, value);
  else if (key == "initial") {
    if (value != "sine" && !value.starts_with("file:")) {
      throw ConfigError("initial must be 'sine' or 'file:PATH', got '" + std::string(value) + "'");
    }
    config.initial = std::string(value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

void apply_line(RunConfig& config, std::string_view line, std::size_t line_no) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + std::string(line) + "'");
  }
  const auto key = trim(line.substr(0, eq));
  const auto value = trim(line.substr(eq + 1));
  if (key.empty() || value.empty()) {
    throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
  }
  assign(config, key, value);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_line(config, line, line_no);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

void apply_override(RunConfig& config, std::string_view assignment) { apply_line(config, trim(assignment), 0); }

InitialData load_initial_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::pair<double, double>> samples;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ConfigError("initial CSV line " + std::to_string(line_no) + ": expected x,u0");
    const auto xs = trim(line.substr(0, comma));
    const auto us = trim(line.substr(comma + 1));
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(xs.data(), xs.data() + xs.size(), x);
    if (ec != std::errc{} || ptr != xs.data() + xs.size()) {
      if (samples.empty()) continue;  // header row
      throw ConfigError("initial CSV line " + std::to_string(line_no) + ": bad x value");
    }
    samples.emplace_back(x, parse_number<double>("u0", us));
  }
  try {
    return InitialData::custom(std::move(samples));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial data '") + path.string() + "': " + e.what());
  }
}

InitialData resolve_initial(const RunConfig& config, const std::filesystem::path& base_dir) {
  if (config.initial == "sine") return InitialData::sine_bump();
  std::filesystem::path path = config.initial.substr(5);
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  return load_initial_csv(path);
}

std::string describe(const RunConfig& config) {
  const auto& p = config.params;
  std::string out;
  auto add = [&out](std::string_view key, const std::string& value) {
    if (!out.empty()) out += ',';
    out += key;
    out += '=';
    out += value;
  };
  add("p", format_number(p.p));
  add("q", format_number(p.q));
  add("tau", format_number(p.tau));
  add("h", format_number(p.h));
  add("lambda", format_number(p.lambda));
  add("blow_threshold", format_number(p.blow_threshold));
  add("max_steps", std::to_string(p.max_steps));
  add("picard_tol", format_number(p.picard_tol));
  add("picard_max_iters", std::to_string(p.picard_max_iters));
  add("initial", config.initial);
  return out;
}

}  // namespace cwblowup
