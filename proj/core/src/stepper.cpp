#include "cwblowup/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cwblowup {

namespace {

constexpr int kMaxTauHalvings = 20;

int sign_of(double d, double noise) {
  if (d > noise) return 1;
  if (d < -noise) return -1;
  return 0;
}

double at(std::span<const double> u, int j) { return u[static_cast<std::size_t>(j)]; }

// Scale below which a central difference is treated as rounding noise.
double noise_floor(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return 64.0 * std::numeric_limits<double>::epsilon() * s;
}

// Folds rows 1..m of the full system using u_{m+1} = u_{m-1}.
TriDiagSystem fold_half(const TriDiagSystem& full, int m) {
  const auto half = static_cast<std::size_t>(m);
  TriDiagSystem out;
  out.diag.assign(full.diag.begin(), full.diag.begin() + static_cast<std::ptrdiff_t>(half));
  out.rhs.assign(full.rhs.begin(), full.rhs.begin() + static_cast<std::ptrdiff_t>(half));
  out.sub.assign(full.sub.begin(), full.sub.begin() + static_cast<std::ptrdiff_t>(half - 1));
  out.sup.assign(full.sup.begin(), full.sup.begin() + static_cast<std::ptrdiff_t>(half - 1));
  out.sub.back() += full.sup[half - 1];
  return out;
}

struct Solve {
  std::vector<double> u;  // full vector including boundary zeros
};

Solve solve_once(const SolutionState& state, const Grid& grid, const SimParams& params, double tau_n,
                 std::span<const int> signs, bool symmetric) {
  const TriDiagSystem full = assemble(state, grid, params, tau_n, signs);
  const int K = grid.intervals();
  const int m = grid.middle();
  Solve out;
  out.u.assign(static_cast<std::size_t>(K + 1), 0.0);
  if (symmetric && m >= 2) {
    const std::vector<double> x = solve_tridiag(fold_half(full, m));
    for (int j = 1; j <= m; ++j) {
      const double v = x[static_cast<std::size_t>(j - 1)];
      out.u[static_cast<std::size_t>(j)] = v;
      out.u[static_cast<std::size_t>(K - j)] = v;
    }
  } else {
    const std::vector<double> x = solve_tridiag(full);
    std::copy(x.begin(), x.end(), out.u.begin() + 1);
  }
  return out;
}

// Nodes where the frozen sign s_j disagrees with the solution, i.e.
// s_j (u_{j+1} - u_{j-1}) != |u_{j+1} - u_{j-1}| beyond rounding.
int count_contradictions(std::span<const double> u, std::span<const double> u_old, const SimParams& params,
                         std::span<const int> signs) {
  const double noise = noise_floor(u);
  const int N = static_cast<int>(u.size()) - 2;
  int bad = 0;
  for (int j = 1; j <= N; ++j) {
    const bool active = params.q == 1.0 || at(u_old, j + 1) != at(u_old, j - 1);
    if (!active) continue;
    const double d = at(u, j + 1) - at(u, j - 1);
    if (std::abs(d) - signs[static_cast<std::size_t>(j - 1)] * d > noise) ++bad;
  }
  return bad;
}

}  // namespace

std::vector<int> central_signs(std::span<const double> u) {
  const int N = static_cast<int>(u.size()) - 2;
  std::vector<int> s(static_cast<std::size_t>(std::max(N, 0)), 0);
  for (int j = 1; j <= N; ++j) s[static_cast<std::size_t>(j - 1)] = sign_of(at(u, j + 1) - at(u, j - 1), 0.0);
  return s;
}

TriDiagSystem assemble(const SolutionState& state, const Grid& grid, const SimParams& params, double tau_n,
                       std::span<const int> signs) {
  const int N = grid.interior_count();
  const std::span<const double> u = state.u;
  if (static_cast<int>(u.size()) != N + 2 || static_cast<int>(signs.size()) != N) {
    throw std::invalid_argument("assemble: state or sign vector does not match the grid");
  }
  const double h = grid.spacing();
  const double l = grid.mesh_ratio(tau_n);
  const double g0 = tau_n * std::pow(2.0 * h, -params.q);

  TriDiagSystem sys;
  const auto n = static_cast<std::size_t>(N);
  sys.diag.assign(n, 1.0 + 2.0 * l);
  sys.sub.assign(n > 0 ? n - 1 : 0, 0.0);
  sys.sup.assign(n > 0 ? n - 1 : 0, 0.0);
  sys.rhs.resize(n);
  for (int j = 1; j <= N; ++j) {
    const auto r = static_cast<std::size_t>(j - 1);
    const double uj = at(u, j);
    sys.rhs[r] = uj + tau_n * std::pow(uj, params.p);
    const double grad = params.q == 1.0 ? 1.0 : std::pow(std::abs(at(u, j + 1) - at(u, j - 1)), params.q - 1.0);
    const double gs = g0 * grad * signs[r];
    if (j > 1) sys.sub[r - 1] = -l - gs;
    if (j < N) sys.sup[r] = -l + gs;
  }
  if (const std::size_t bad = sys.first_non_dominant_row(); bad != sys.size()) {
    throw StepError(StepErrorKind::Stiff, "assemble: diagonal dominance lost in row " + std::to_string(bad + 1));
  }
  return sys;
}

StepResult step(const SolutionState& state, const Grid& grid, const SimParams& params) {
  const double sup = state.sup_norm();
  if (sup > params.blow_threshold) {
    throw StepError(StepErrorKind::AboveThreshold, "step: state already exceeds blow_threshold");
  }
  StepResult result;
  result.symmetric_solve = state.is_symmetric();
  double tau_n = sup > 0.0 ? compute_tau(params, sup) : params.tau;

  std::vector<int> signs = central_signs(state.u);
  Solve current;
  for (int halving = 0;; ++halving) {
    try {
      current = solve_once(state, grid, params, tau_n, signs, result.symmetric_solve);
      result.tau_halvings = halving;
      break;
    } catch (const StepError& e) {
      if (e.kind() != StepErrorKind::Stiff || halving == kMaxTauHalvings) throw;
      tau_n *= 0.5;
    }
  }

  result.sign_flips = count_contradictions(current.u, state.u, params, signs);
  if (result.sign_flips > 0) {
    bool settled = false;
    while (result.picard_iters < params.picard_max_iters) {
      const double noise = noise_floor(current.u);
      const int N = grid.interior_count();
      for (int j = 1; j <= N; ++j) {
        signs[static_cast<std::size_t>(j - 1)] = sign_of(at(current.u, j + 1) - at(current.u, j - 1), noise);
      }
      Solve next = solve_once(state, grid, params, tau_n, signs, result.symmetric_solve);
      ++result.picard_iters;
      double diff = 0.0;
      double scale = 1.0;
      for (std::size_t i = 0; i < next.u.size(); ++i) {
        diff = std::max(diff, std::abs(next.u[i] - current.u[i]));
        scale = std::max(scale, std::abs(next.u[i]));
      }
      current = std::move(next);
      if (count_contradictions(current.u, state.u, params, signs) == 0 && diff < params.picard_tol * scale) {
        settled = true;
        break;
      }
    }
    if (!settled) {
      throw StepError(StepErrorKind::NoPicardFixpoint,
                      "step: sign pattern did not settle after " + std::to_string(result.picard_iters) + " iterations");
    }
  }

  for (double& v : current.u) {
    if (v < 0.0) {
      if (v < -params.picard_tol) {
        throw StepError(StepErrorKind::NegativeSolution, "step: solution went negative");
      }
      v = 0.0;
    }
  }

  result.next.u = std::move(current.u);
  result.next.t = state.t + tau_n;
  result.next.n = state.n + 1;
  result.next.tau_last = tau_n;
  result.tau_n = tau_n;
  result.mesh_ratio = grid.mesh_ratio(tau_n);
  return result;
}

}  // namespace cwblowup
