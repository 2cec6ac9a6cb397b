#include "hgclust/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hgclust {

Matrix build_similarity(const WeightedHypergraph& w) {
  Matrix a = Matrix::Zero(w.n(), w.n());
  for (std::size_t e = 0; e < w.edge_count(); ++e) {
    const auto nodes = w.nodes(e);
    const double weight = w.weight(e);
    for (std::size_t x = 0; x < nodes.size(); ++x) {
      for (std::size_t y = x + 1; y < nodes.size(); ++y) {
        a(nodes[x], nodes[y]) += weight;
      }
    }
  }
  // Accumulated in the upper triangle only, so the mirror is exact.
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = a(j, i);
  }
  return a;
}

double within_similarity(Index n, int d, Index s, double p, double q) {
  return binomial(s - 2, d - 2) * (p - q) + binomial(n - 2, d - 2) * q;
}

double cross_similarity(Index n, int d, double q) { return binomial(n - 2, d - 2) * q; }

ExpectedSimilarity expected_similarity(const ModelParams& params, const Partition& partition) {
  params.validate();
  if (partition.n() != params.n) throw std::invalid_argument("expected_similarity: partition size != n");
  const int k = partition.k();
  const auto sizes = partition.sizes();
  const double cross = cross_similarity(params.n, params.d, params.q);

  ExpectedSimilarity out;
  auto& profile = out.profile;
  profile.delta = Matrix::Constant(k, k, cross);
  for (int a = 0; a < k; ++a) {
    profile.delta(a, a) = within_similarity(params.n, params.d, sizes[a], params.p, params.q);
  }
  profile.p_minus = profile.delta.diagonal().minCoeff();
  profile.q_plus = cross;

  const Index n = params.n;
  out.matrix = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const int li = partition.label(i);
      const int lj = partition.label(j);
      out.matrix(i, j) = (li == lj && li <= k) ? profile.delta(li - 1, li - 1) : cross;
    }
  }
  return out;
}

RecoveryCheck recovery_condition(const ModelParams& params, Index s_min, double c1) {
  const double n = params.n;
  const double gap = params.p - params.q;
  const double c_s = binomial(s_min - 2, params.d - 2);
  RecoveryCheck out;
  out.lhs = static_cast<double>(s_min) * s_min * c_s * c_s * gap * gap;
  out.rhs = c1 * binomial(params.n - 2, params.d - 2) * params.p * (s_min * std::log(n) + n);
  out.holds = out.lhs >= out.rhs;
  return out;
}

LambdaWindow lambda_window(double p_minus, double q_plus, double c) {
  if (p_minus < q_plus) {
    throw std::invalid_argument("lambda_window: p_minus < q_plus (complement a disassortative hypergraph first)");
  }
  if (!(c > 0.0 && c <= 0.5)) throw std::invalid_argument("lambda_window: c must lie in (0, 1/2]");
  return {c * p_minus + (1.0 - c) * q_plus, (1.0 - c) * p_minus + c * q_plus};
}

LambdaWindow lambda_window(const SimilarityProfile& profile, double c) {
  return lambda_window(profile.p_minus, profile.q_plus, c);
}

void check_similarity(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("similarity matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("similarity matrix has non-finite entries");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) throw std::invalid_argument("similarity matrix must have zero diagonal");
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != a(j, i)) throw std::invalid_argument("similarity matrix must be symmetric");
    }
  }
}

}  // namespace hgclust
