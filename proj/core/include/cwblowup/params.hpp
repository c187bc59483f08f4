#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cwblowup {

class Grid;
struct SolutionState;

/// Run parameters for u_t = u_xx + u^p - |u_x|^q on (-1, 1) with zero
/// Dirichlet data. Immutable once a run starts.
struct SimParams {
  double p = 3.0;
  double q = 1.0;
  double tau = 0.1;   // base time-step parameter
  double h = 0.05;    // base space-step parameter, at most 2
  double lambda = 10.0;
  double blow_threshold = 1e12;
  std::int64_t max_steps = 1'000'000;
  double picard_tol = 1e-12;
  int picard_max_iters = 50;
};

/// Which of the blow-up set results covers a (p, q) pair.
enum class Regime {
  /// p = 2, q = 1: blow-up at the peak and its two neighbours, bounded beyond.
  ThreePoint,
  /// p > 2, q < 2(p-1)/p: blow-up at the peak only.
  SinglePoint,
  /// Anything else; no discrete result is available.
  Uncovered,
};

[[nodiscard]] Regime classify_regime(double p, double q);
[[nodiscard]] const char* to_string(Regime regime);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::string> warnings;
  /// h < 1/(1 + tau); needed for neighbour blow-up when p = 2, q = 1.
  bool mesh_condition_three_point = false;
  Regime regime = Regime::Uncovered;

  [[nodiscard]] bool ok() const;
  /// Messages of all failed checks joined with "; ".
  [[nodiscard]] std::string failure_summary() const;
};

/// Checks every parameter invariant. Never throws.
[[nodiscard]] ValidationReport validate(const SimParams& params);

enum class InitialKind { SineBump, Custom };

/// u0 on [-1, 1]. SineBump is lambda * cos(pi x / 2); Custom is a table of
/// (x, u0) samples with strictly increasing x, linearly interpolated.
class InitialData {
 public:
  static InitialData sine_bump();
  /// Throws std::invalid_argument if the table violates the admissibility
  /// conditions (nonnegative, nonconstant, symmetric, increasing on [-1, 0],
  /// zero at both ends, peak above 1).
  static InitialData custom(std::vector<std::pair<double, double>> samples);

  [[nodiscard]] InitialKind kind() const { return kind_; }
  [[nodiscard]] const std::vector<std::pair<double, double>>& samples() const {
    return samples_;
  }

  [[nodiscard]] double value(double x, double lambda) const;
  /// Largest value of u0 (lambda for SineBump).
  [[nodiscard]] double peak(double lambda) const;
  /// Warnings raised when the data was accepted (e.g. peak not much above 1).
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  InitialKind kind_ = InitialKind::SineBump;
  std::vector<std::pair<double, double>> samples_;
  std::vector<std::string> warnings_;
};

/// Samples u0 on the grid nodes. Boundary entries are exactly zero, t = 0,
/// n = 0. Throws std::invalid_argument if the sampled profile has peak <= 1.
[[nodiscard]] SolutionState make_initial(const SimParams& params,
                                         const InitialData& initial,
                                         const Grid& grid);

}  // namespace cwblowup
