#include "hgclust/sdp.hpp"

#include <algorithm>
#include <cmath>

namespace hgclust {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double clipped_sum(const std::vector<double>& values, double shift) {
  double total = 0.0;
  for (double v : values) total += clamp01(v - shift);
  return total;
}

struct ModeTargets {
  double trace_total;
  std::optional<double> ones_total;
};

ModeTargets targets(const SdpMode& mode, Index n) {
  if (std::holds_alternative<PenalizedMode>(mode)) return {static_cast<double>(n), std::nullopt};
  const auto& con = std::get<ConstrainedMode>(mode);
  return {con.trace_total, con.ones_total};
}

// Strictly feasible point alpha I + beta 11^T of the box/affine set; its
// smallest eigenvalue is alpha.
struct InteriorPoint {
  double alpha;
  double beta;
};

InteriorPoint interior_point(const ModeTargets& t, Index n) {
  const double nn = static_cast<double>(n);
  if (!t.ones_total || n == 1) return {t.trace_total / nn, 0.0};
  const double beta = (*t.ones_total - t.trace_total) / (nn * nn - nn);
  return {t.trace_total / nn - beta, beta};
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  return es.eigenvalues()(0);
}

}  // namespace

ConstrainedMode balanced_constraints(int k, Index s) {
  const double ks = static_cast<double>(k) * s;
  return {ks, ks * s};
}

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("solver: rho must be > 0");
  if (tol_primal && !(*tol_primal > 0.0)) throw std::invalid_argument("solver: tol_primal must be > 0");
  if (tol_dual && !(*tol_dual > 0.0)) throw std::invalid_argument("solver: tol_dual must be > 0");
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (!(over_relaxation >= 1.0 && over_relaxation <= 1.8)) {
    throw std::invalid_argument("solver: over_relaxation must lie in [1, 1.8]");
  }
}

double SdpSolution::integrality_gap() const {
  return (x.array() - x.array().round()).abs().maxCoeff();
}

double objective(const Matrix& a, double lambda, const Matrix& x) {
  if (a.rows() != x.rows() || a.cols() != x.cols()) throw std::invalid_argument("objective: shape mismatch");
  return ((a.array() - lambda) * x.array()).sum();
}

Matrix project_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in psd projection");
  const auto& vals = es.eigenvalues();  // ascending
  Eigen::Index first = 0;
  while (first < vals.size() && vals(first) <= 0.0) ++first;
  const Eigen::Index count = vals.size() - first;
  if (count == 0) return Matrix::Zero(m.rows(), m.cols());
  const auto v = es.eigenvectors().rightCols(count);
  Matrix out = v * vals.tail(count).asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

double clipped_sum_shift(std::vector<double> values, double target) {
  const double total = static_cast<double>(values.size());
  if (!(target >= 0.0 && target <= total)) throw std::invalid_argument("clipped_sum_shift: target out of range");
  if (values.empty()) return 0.0;
  std::vector<double> knots;
  knots.reserve(2 * values.size());
  for (double v : values) {
    knots.push_back(v - 1.0);
    knots.push_back(v);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  // f is nonincreasing and linear between consecutive knots.
  std::size_t lo = 0;
  std::size_t hi = knots.size() - 1;
  if (clipped_sum(values, knots[lo]) <= target) return knots[lo];
  if (clipped_sum(values, knots[hi]) >= target) return knots[hi];
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (clipped_sum(values, knots[mid]) >= target) lo = mid; else hi = mid;
  }
  const double f_lo = clipped_sum(values, knots[lo]);
  const double f_hi = clipped_sum(values, knots[hi]);
  if (f_lo == f_hi) return knots[lo];
  return knots[lo] + (f_lo - target) * (knots[hi] - knots[lo]) / (f_lo - f_hi);
}

Matrix project_affine_box(const Matrix& m, const SdpMode& mode) {
  if (m.rows() != m.cols()) throw std::invalid_argument("project_affine_box: matrix must be square");
  const Index n = static_cast<Index>(m.rows());
  const ModeTargets t = targets(mode, n);
  if (!(t.trace_total >= 0.0 && t.trace_total <= n)) {
    throw std::invalid_argument("project_affine_box: trace target outside [0, n]");
  }

  Matrix out(n, n);
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) diag[i] = m(i, i);
  const double gamma = clipped_sum_shift(diag, t.trace_total);
  for (Index i = 0; i < n; ++i) out(i, i) = clamp01(m(i, i) - gamma);

  double beta = 0.0;
  if (t.ones_total) {
    const double off_target = 0.5 * (*t.ones_total - t.trace_total);
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Index j = 1; j < n; ++j) {
      for (Index i = 0; i < j; ++i) upper.push_back(0.5 * (m(i, j) + m(j, i)));
    }
    if (!(off_target >= 0.0 && off_target <= static_cast<double>(upper.size()))) {
      throw std::invalid_argument("project_affine_box: ones_total incompatible with trace_total");
    }
    beta = clipped_sum_shift(std::move(upper), off_target);
  }
  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double v = clamp01(0.5 * (m(i, j) + m(j, i)) - beta);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

void validate_problem(const SdpProblem& problem) {
  const Matrix& a = problem.similarity;
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("sdp: similarity must be square and non-empty");
  if (!a.allFinite()) throw std::invalid_argument("sdp: similarity has non-finite entries");
  for (Eigen::Index j = 1; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (a(i, j) != a(j, i)) throw std::invalid_argument("sdp: similarity must be symmetric");
    }
  }
  const double n = static_cast<double>(a.rows());
  if (const auto* pen = std::get_if<PenalizedMode>(&problem.mode)) {
    if (!(pen->lambda >= 0.0) || !std::isfinite(pen->lambda)) throw std::invalid_argument("sdp: lambda must be >= 0");
  } else {
    const auto& con = std::get<ConstrainedMode>(problem.mode);
    if (!(con.trace_total > 0.0 && con.trace_total <= n)) {
      throw std::invalid_argument("sdp: trace_total must lie in (0, n]");
    }
    if (!(con.ones_total >= con.trace_total && con.ones_total <= con.trace_total * n)) {
      throw std::invalid_argument("sdp: ones_total must lie in [trace_total, trace_total * n]");
    }
  }
}

SdpSolution solve(const SdpProblem& problem, const SolverConfig& cfg) {
  validate_problem(problem);
  cfg.validate();
  const Matrix& a = problem.similarity;
  const Index n = static_cast<Index>(a.rows());
  const double lambda = std::holds_alternative<PenalizedMode>(problem.mode)
                            ? std::get<PenalizedMode>(problem.mode).lambda
                            : 0.0;
  const ModeTargets t = targets(problem.mode, n);

  const Matrix cost = a.array() - lambda;
  const double scale = std::max(cost.cwiseAbs().maxCoeff(), 1e-300);
  const Matrix scaled_cost = cost / scale;

  const double tol_p = cfg.tol_primal.value_or(1e-5 * n);
  const double tol_d = cfg.tol_dual.value_or(1e-5 * n);
  const double alpha = cfg.over_relaxation;
  double rho = cfg.rho;

  const InteriorPoint x0 = interior_point(t, n);
  auto interior = [&] {
    Matrix m = Matrix::Constant(n, n, x0.beta);
    m.diagonal().array() += x0.alpha;
    return m;
  };

  SdpSolution sol;
  Matrix z = interior();
  Matrix u = Matrix::Zero(n, n);
  Matrix x;
  double r = 0.0;
  double s = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    x = project_psd(z - u + scaled_cost / rho);
    const Matrix relaxed = alpha * x + (1.0 - alpha) * z;
    Matrix z_old = std::move(z);
    z = project_affine_box(relaxed + u, problem.mode);
    u += relaxed - z;

    r = (x - z).norm();
    s = rho * (z - z_old).norm();
    sol.iterations = it;
    if (cfg.record_trace) sol.trace.push_back({it, objective(a, lambda, z), r, s});
    if (r <= tol_p && s <= tol_d) {
      sol.converged = true;
      break;
    }
    if (cfg.residual_balancing) {
      if (r > 10.0 * s) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s > 10.0 * r) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  sol.primal_residual = r;
  sol.dual_residual = s;

  // z satisfies the box and affine constraints exactly; pull it toward the
  // interior point just far enough to make it psd as well.
  const double lam_min = min_eigenvalue(z);
  if (lam_min < 0.0) {
    const double theta = x0.alpha > 0.0 ? -lam_min / (x0.alpha - lam_min) : 1.0;
    z = (1.0 - theta) * z + theta * interior();
  }
  sol.x = std::move(z);
  sol.objective = objective(a, lambda, sol.x);
  return sol;
}

}  // namespace hgclust
