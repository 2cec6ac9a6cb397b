#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hgclust/model.hpp"

namespace hgclust {

/// Eigensolver failure or other numerical breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// maximize <A - lambda 1, X>  s.t.  X psd, 0 <= X_ij <= 1, Trace(X) = n.
struct PenalizedMode {
  double lambda = 0.0;
};

/// maximize <A, X>  s.t.  X psd, 0 <= X_ij <= 1, Trace(X) = trace_total,
/// <1, X> = ones_total.
struct ConstrainedMode {
  double trace_total = 0.0;
  double ones_total = 0.0;
};

using SdpMode = std::variant<PenalizedMode, ConstrainedMode>;

/// Constraint constants for k equal communities of size s (outliers allowed).
ConstrainedMode balanced_constraints(int k, Index s);

struct SdpProblem {
  Matrix similarity;
  SdpMode mode;
};

struct SolverConfig {
  double rho = 1.0;
  std::optional<double> tol_primal;  // default 1e-5 * n
  std::optional<double> tol_dual;    // default 1e-5 * n
  int max_iter = 5000;
  double over_relaxation = 1.6;
  bool residual_balancing = true;
  bool record_trace = false;

  void validate() const;
};

struct SolverTraceRow {
  int iter = 0;
  double objective = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
};

struct SdpSolution {
  Matrix x;
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  std::vector<SolverTraceRow> trace;

  /// max_ij |X_ij - round(X_ij)|
  double integrality_gap() const;
};

/// Two-block splitting: X-block projects onto the psd cone, Z-block onto the
/// box/affine set, scaled dual update with over-relaxation and residual
/// balancing. The returned X is exactly box/affine feasible and psd up to
/// rounding.
SdpSolution solve(const SdpProblem& problem, const SolverConfig& cfg = {});

/// sum_ij (A_ij - lambda) X_ij
double objective(const Matrix& a, double lambda, const Matrix& x);

/// Frobenius-nearest psd matrix (negative eigenvalues clipped).
Matrix project_psd(const Matrix& m);

/// Euclidean projection of sym(M) onto {0 <= X_ij <= 1, Trace = t [, <1,X> = c]}.
Matrix project_affine_box(const Matrix& m, const SdpMode& mode);

/// Returns beta with sum_i clamp(v_i - beta, 0, 1) == target (exact, piecewise linear).
double clipped_sum_shift(std::vector<double> values, double target);

void validate_problem(const SdpProblem& problem);

}  // namespace hgclust
