#include "cwblowup/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cwblowup {

double SolutionState::sup_norm() const {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

bool SolutionState::is_symmetric() const {
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < n / 2; ++j) {
    if (u[j] != u[n - 1 - j]) return false;
  }
  return true;
}

double SolutionState::asymmetry() const {
  const std::size_t n = u.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n / 2; ++j) worst = std::max(worst, std::abs(u[j] - u[n - 1 - j]));
  return worst;
}

Grid::Grid(int intervals) : spacing_(2.0 / intervals), intervals_(intervals) {
  const int m = intervals / 2;
  nodes_.resize(static_cast<std::size_t>(intervals + 1));
  for (int k = 0; k <= m; ++k) {
    const double x = k * spacing_;
    nodes_[static_cast<std::size_t>(m + k)] = x;
    nodes_[static_cast<std::size_t>(m - k)] = -x;
  }
  nodes_.front() = -1.0;
  nodes_.back() = 1.0;
}

Grid Grid::with_intervals(int intervals) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("grid needs an even interval count >= 2, got " + std::to_string(intervals));
  }
  return Grid(intervals);
}

double compute_tau(const SimParams& params, double sup_norm) {
  if (!(sup_norm > 0.0)) throw std::domain_error("compute_tau: sup norm must be positive");
  return params.tau * std::min(1.0, std::pow(sup_norm, 1.0 - params.p));
}

double compute_h(const SimParams& params, double sup_norm) {
  if (!(sup_norm > 0.0)) throw std::domain_error("compute_h: sup norm must be positive");
  if (params.q >= 2.0) throw std::domain_error("compute_h: q >= 2 is unsupported");
  const double adaptive = std::pow(2.0 * std::pow(sup_norm, 1.0 - params.q), 1.0 / (2.0 - params.q));
  return std::min(params.h, adaptive);
}

Grid build_grid(double h_target) {
  if (!(h_target > 0.0) || h_target > 2.0) {
    throw std::invalid_argument("build_grid: h_target must lie in (0, 2]");
  }
  const double ratio = 2.0 / h_target;
  // Absorb representation error so exact divisors (0.05, 4e-4) are not bumped up.
  const double k_real = std::ceil(ratio * (1.0 - 1e-12));
  if (k_real > 1e9) throw std::invalid_argument("build_grid: h_target too small");
  auto k = static_cast<int>(k_real);
  if (k % 2 != 0) ++k;
  return Grid::with_intervals(std::max(k, 2));
}

double terminal_spacing(const SimParams& params) {
  return build_grid(compute_h(params, params.blow_threshold)).spacing();
}

SolutionState regrid(const SolutionState& state, const Grid& from, const Grid& to) {
  if (state.u.size() != static_cast<std::size_t>(from.intervals() + 1)) {
    throw std::invalid_argument("regrid: state does not live on the source grid");
  }
  if (to.intervals() < from.intervals()) {
    throw std::invalid_argument("regrid: refusing to coarsen from K=" + std::to_string(from.intervals()) +
                                " to K=" + std::to_string(to.intervals()));
  }
  SolutionState out;
  out.t = state.t;
  out.n = state.n;
  out.tau_last = state.tau_last;
  if (to == from) {
    out.u = state.u;
    return out;
  }

  const long long k_old = from.intervals();
  const long long k_new = to.intervals();
  const int m_old = from.middle();
  const int m_new = to.middle();
  out.u.assign(static_cast<std::size_t>(k_new + 1), 0.0);
  const auto& u = state.u;

  // Node m_new + k sits at k * (k_old / k_new) old cells from the centre;
  // integer arithmetic keeps the cell index and weight exact.
  for (int k = 0; k <= m_new; ++k) {
    const long long num = static_cast<long long>(k) * k_old;
    const auto cell = static_cast<int>(num / k_new);
    const double w = static_cast<double>(num % k_new) / static_cast<double>(k_new);
    auto at = [&](int j) { return u[static_cast<std::size_t>(j)]; };
    double right = at(m_old + cell);
    double left = at(m_old - cell);
    if (w != 0.0) {
      right = (1.0 - w) * right + w * at(m_old + cell + 1);
      left = (1.0 - w) * left + w * at(m_old - cell - 1);
    }
    out.u[static_cast<std::size_t>(m_new + k)] = right;
    out.u[static_cast<std::size_t>(m_new - k)] = left;
  }
  out.u.front() = 0.0;
  out.u.back() = 0.0;
  return out;
}

}  // namespace cwblowup
