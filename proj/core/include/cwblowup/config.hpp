#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cwblowup/params.hpp"

namespace cwblowup {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed run configuration. `initial` is "sine" or "file:PATH".
struct RunConfig {
  SimParams params;
  std::string initial = "sine";
};

/// Flat key=value text; '#' starts a comment, blank lines are ignored.
/// Keys: p, q, tau, h, lambda, blow_threshold, max_steps, picard_tol,
/// picard_max_iters, initial. Throws ConfigError on unknown keys, malformed
/// lines or unparsable values.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Applies one "key=value" override.
void apply_override(RunConfig& config, std::string_view assignment);

/// Two-column CSV (x, u0), optional header row and '#' comments.
[[nodiscard]] InitialData load_initial_csv(const std::filesystem::path& path);

/// Resolves `config.initial`; relative file paths are taken relative to `base_dir`.
[[nodiscard]] InitialData resolve_initial(const RunConfig& config, const std::filesystem::path& base_dir = {});

/// "p=3,q=1,tau=0.1,..." listing every resolved parameter.
[[nodiscard]] std::string describe(const RunConfig& config);

}  // namespace cwblowup
