#include "cwblowup/tridiag.hpp"

#include <algorithm>
#include <cmath>

namespace cwblowup {

const char* to_string(StepErrorKind kind) {
  switch (kind) {
    case StepErrorKind::Stiff: return "stiff";
    case StepErrorKind::Singular: return "singular";
    case StepErrorKind::NoPicardFixpoint: return "no_picard_fixpoint";
    case StepErrorKind::NegativeSolution: return "negative_solution";
    case StepErrorKind::AboveThreshold: return "above_threshold";
  }
  return "unknown";
}

std::size_t TriDiagSystem::first_non_dominant_row() const {
  const std::size_t n = size();
  for (std::size_t j = 0; j < n; ++j) {
    const double off = (j > 0 ? std::abs(sub[j - 1]) : 0.0) + (j + 1 < n ? std::abs(sup[j]) : 0.0);
    if (!(std::abs(diag[j]) > off)) return j;
  }
  return n;
}

double TriDiagSystem::residual(const std::vector<double>& x) const {
  const std::size_t n = size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double ax = diag[j] * x[j];
    if (j > 0) ax += sub[j - 1] * x[j - 1];
    if (j + 1 < n) ax += sup[j] * x[j + 1];
    worst = std::max(worst, std::abs(ax - rhs[j]));
  }
  return worst;
}

std::vector<double> solve_tridiag(const TriDiagSystem& sys) {
  const std::size_t n = sys.size();
  if (n == 0) return {};
  if (sys.rhs.size() != n || sys.sub.size() != n - 1 || sys.sup.size() != n - 1) {
    throw std::invalid_argument("solve_tridiag: inconsistent band sizes");
  }
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n, 0.0);

  double pivot = sys.diag[0];
  if (pivot == 0.0) throw StepError(StepErrorKind::Singular, "solve_tridiag: zero pivot in row 0");
  if (n > 1) c[0] = sys.sup[0] / pivot;
  x[0] = sys.rhs[0] / pivot;
  for (std::size_t j = 1; j < n; ++j) {
    pivot = sys.diag[j] - sys.sub[j - 1] * c[j - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw StepError(StepErrorKind::Singular, "solve_tridiag: zero pivot in row " + std::to_string(j));
    }
    if (j + 1 < n) c[j] = sys.sup[j] / pivot;
    x[j] = (sys.rhs[j] - sys.sub[j - 1] * x[j - 1]) / pivot;
  }
  for (std::size_t j = n - 1; j-- > 0;) x[j] -= c[j] * x[j + 1];
  return x;
}

}  // namespace cwblowup
