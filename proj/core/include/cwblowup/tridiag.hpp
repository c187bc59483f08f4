#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwblowup {

enum class StepErrorKind {
  Stiff,             // diagonal dominance lost even after halving tau_n
  Singular,          // zero pivot in the tridiagonal elimination
  NoPicardFixpoint,  // sign pattern did not settle within picard_max_iters
  NegativeSolution,  // an entry fell below -picard_tol
  AboveThreshold,    // input already past blow_threshold
};

[[nodiscard]] const char* to_string(StepErrorKind kind);

class StepError : public std::runtime_error {
 public:
  StepError(StepErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] StepErrorKind kind() const { return kind_; }

 private:
  StepErrorKind kind_;
};

/// Row j reads sub[j-1] x[j-1] + diag[j] x[j] + sup[j] x[j+1] = rhs[j].
struct TriDiagSystem {
  std::vector<double> sub;   // size n-1
  std::vector<double> diag;  // size n
  std::vector<double> sup;   // size n-1
  std::vector<double> rhs;   // size n

  [[nodiscard]] std::size_t size() const { return diag.size(); }
  /// First row with |diag| <= |sub| + |sup|, or size() if strictly dominant.
  [[nodiscard]] std::size_t first_non_dominant_row() const;
  [[nodiscard]] bool strictly_dominant() const { return first_non_dominant_row() == size(); }
  /// ||A x - rhs||_inf.
  [[nodiscard]] double residual(const std::vector<double>& x) const;
};

/// Thomas algorithm. Throws StepError{Singular} on a zero pivot and
/// std::invalid_argument on inconsistent band sizes.
[[nodiscard]] std::vector<double> solve_tridiag(const TriDiagSystem& sys);

}  // namespace cwblowup
