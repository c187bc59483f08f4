#include "cwblowup/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cwblowup/grid.hpp"
#include "cwblowup/state.hpp"

namespace cwblowup {

namespace {

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void add(ValidationReport& report, std::string name, bool passed, std::string message) {
  report.checks.push_back({std::move(name), passed, passed ? std::string{} : std::move(message)});
}

}  // namespace

Regime classify_regime(double p, double q) {
  if (p == 2.0 && q == 1.0) return Regime::ThreePoint;
  if (p > 2.0 && q >= 1.0 && q < 2.0 * (p - 1.0) / p) return Regime::SinglePoint;
  return Regime::Uncovered;
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::ThreePoint: return "three_point";
    case Regime::SinglePoint: return "single_point";
    case Regime::Uncovered: return "uncovered";
  }
  return "uncovered";
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::failure_summary() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += "; ";
    out += c.name + ": " + c.message;
  }
  return out;
}

ValidationReport validate(const SimParams& params) {
  ValidationReport r;
  const auto& [p, q, tau, h, lambda, thr, max_steps, picard_tol, picard_iters] = params;

  const bool finite = std::isfinite(p) && std::isfinite(q) && std::isfinite(tau) &&
                      std::isfinite(h) && std::isfinite(lambda) && std::isfinite(thr) &&
                      std::isfinite(picard_tol);
  add(r, "finite", finite, "all real parameters must be finite");

  add(r, "p", p > 1.0, "p must exceed 1, got " + str(p));
  const double q_max = 2.0 * p / (p + 1.0);
  add(r, "q", q >= 1.0 && q <= q_max,
      "q must lie in [1, 2p/(p+1)] = [1, " + str(q_max) + "], got " + str(q));
  add(r, "tau", tau > 0.0, "tau must be positive, got " + str(tau));
  add(r, "h", h > 0.0 && h <= 2.0, "h must lie in (0, 2], got " + str(h));
  add(r, "lambda", lambda > 0.0, "lambda must be positive, got " + str(lambda));

  const bool thr_ok = thr > 1.0 && std::isfinite(std::pow(thr, p));
  add(r, "blow_threshold", thr_ok,
      "blow_threshold must exceed 1 and blow_threshold^p must be finite, got " + str(thr));
  add(r, "max_steps", max_steps >= 0, "max_steps must be nonnegative");
  add(r, "picard_tol", picard_tol > 0.0, "picard_tol must be positive");
  add(r, "picard_max_iters", picard_iters >= 1, "picard_max_iters must be at least 1");

  if (lambda > 0.0 && lambda <= 10.0) {
    r.warnings.push_back("lambda = " + str(lambda) +
                         " is not large; the blow-up regime assumes a peak well above 1");
  }

  r.mesh_condition_three_point = h > 0.0 && tau > 0.0 && h < 1.0 / (1.0 + tau);
  r.regime = classify_regime(p, q);
  return r;
}

InitialData InitialData::sine_bump() { return InitialData{}; }

InitialData InitialData::custom(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 3) {
    throw std::invalid_argument("initial table needs at least 3 samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, u] = samples[i];
    if (!std::isfinite(x) || !std::isfinite(u)) {
      throw std::invalid_argument("initial table has a non-finite entry at row " + std::to_string(i));
    }
    if (u < 0.0) throw std::invalid_argument("(A1) initial data must be nonnegative, u0(" + str(x) + ") < 0");
    if (i > 0 && !(x > samples[i - 1].first)) {
      throw std::invalid_argument("initial table x values must be strictly increasing");
    }
  }
  constexpr double kEndTol = 1e-12;
  if (std::abs(samples.front().first + 1.0) > kEndTol || std::abs(samples.back().first - 1.0) > kEndTol) {
    throw std::invalid_argument("initial table must span exactly [-1, 1]");
  }
  samples.front().first = -1.0;
  samples.back().first = 1.0;

  double peak = 0.0;
  for (const auto& s : samples) peak = std::max(peak, s.second);
  if (peak <= 0.0) throw std::invalid_argument("(A1) initial data must be nonconstant");
  if (samples.front().second > kEndTol * peak || samples.back().second > kEndTol * peak) {
    throw std::invalid_argument("(A4) initial data must vanish at x = -1 and x = 1");
  }
  samples.front().second = 0.0;
  samples.back().second = 0.0;

  InitialData data;
  data.kind_ = InitialKind::Custom;
  data.samples_ = std::move(samples);

  auto interp = [&](double x) {
    const auto& s = data.samples_;
    auto it = std::upper_bound(s.begin(), s.end(), x,
                               [](double v, const std::pair<double, double>& e) { return v < e.first; });
    if (it == s.begin()) return s.front().second;
    if (it == s.end()) return s.back().second;
    const auto& [x1, u1] = *it;
    const auto& [x0, u0] = *(it - 1);
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * u0 + w * u1;
  };
  for (const auto& [x, u] : data.samples_) {
    if (std::abs(u - interp(-x)) > 1e-9 * peak) {
      throw std::invalid_argument("(A2) initial data must be symmetric about 0; mismatch at x = " + str(x));
    }
  }
  double prev = -1.0;
  for (const auto& [x, u] : data.samples_) {
    if (x > 0.0) break;
    if (!(u > prev)) {
      throw std::invalid_argument("(A3) initial data must be strictly increasing on [-1, 0]; fails at x = " +
                                  str(x));
    }
    prev = u;
  }
  if (peak <= 1.0) {
    throw std::invalid_argument("(A5) initial peak must exceed 1, got " + str(peak));
  }
  if (peak <= 10.0) {
    data.warnings_.push_back("(A5) initial peak " + str(peak) + " is not much larger than 1");
  }
  return data;
}

double InitialData::value(double x, double lambda) const {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  if (kind_ == InitialKind::SineBump) {
    // cos form: even in x, so mirrored nodes get bit-identical values.
    return lambda * std::cos(std::numbers::pi * x / 2.0);
  }
  // The table is validated symmetric; evaluate on the left half only.
  const double xl = -std::abs(x);
  auto it = std::upper_bound(samples_.begin(), samples_.end(), xl,
                             [](double v, const std::pair<double, double>& e) { return v < e.first; });
  const auto& [x1, u1] = *it;
  const auto& [x0, u0] = *(it - 1);
  const double w = (xl - x0) / (x1 - x0);
  return (1.0 - w) * u0 + w * u1;
}

double InitialData::peak(double lambda) const {
  if (kind_ == InitialKind::SineBump) return lambda;
  double peak = 0.0;
  for (const auto& s : samples_) peak = std::max(peak, s.second);
  return peak;
}

SolutionState make_initial(const SimParams& params, const InitialData& initial, const Grid& grid) {
  SolutionState state;
  const int K = grid.intervals();
  state.u.assign(static_cast<std::size_t>(K + 1), 0.0);
  for (int j = 1; j < K; ++j) {
    state.u[static_cast<std::size_t>(j)] = initial.value(grid.x(j), params.lambda);
  }
  if (state.sup_norm() <= 1.0) {
    throw std::invalid_argument("(A5) sampled initial peak must exceed 1, got " + str(state.sup_norm()));
  }
  return state;
}

}  // namespace cwblowup
