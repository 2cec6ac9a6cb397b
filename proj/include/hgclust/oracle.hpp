#pragma once

#include <functional>

#include "hgclust/model.hpp"

namespace hgclust {

// Exhaustive reference solvers for tiny instances (n <= 10). Test oracles only.

inline constexpr Index kOracleMaxNodes = 10;

/// Likelihood regularizer for binary weights:
/// mu = (log(1-q) - log(1-p)) / (log p + log(1-q) - log q - log(1-p)).
struct MleConfig {
  double p = 0.0;
  double q = 0.0;
  double mu = 0.0;

  /// Requires 0 < q < p < 1.
  static MleConfig make(double p, double q);
};

/// Calls fn(labels) for each partition of [n] into at most k nonempty blocks,
/// as 1-based restricted-growth strings in lexicographic order.
void for_each_partition(Index n, int k, const std::function<void(const std::vector<int>&)>& fn);

/// argmax over partitions with <= k blocks of sum over homogeneous d-sets e
/// of (W_e - mu). Ties keep the lexicographically smallest label sequence.
Partition brute_force_mle(const WeightedHypergraph& w, int k, const MleConfig& cfg);

struct TruncatedOptimum {
  Partition partition;
  double objective = 0.0;  // <A - lambda 1, Z Z^T>, diagonal included
};

/// argmax over partitions with <= k blocks of <A - lambda 1, Z Z^T>.
TruncatedOptimum brute_force_truncated(const Matrix& a, int k, double lambda);

/// Low-order terms of the expanded log-likelihood polynomial.
struct MlePolynomialTerms {
  double p0 = 0.0;  // at Y = 2Z - 1
  double p1 = 0.0;  // at Y = 2Z - 1
  double p2 = 0.0;  // at Y = 2Z - 1
  double p2_membership = 0.0;  // p2 evaluated at Z itself
};

/// Evaluates p_l(M) = sum_{|I| = l} [sum_{e >= I} (W_e - mu)] [sum_j prod_{i in I} M_ij]
/// by direct enumeration over all d-sets (absent ones weigh 0).
double mle_polynomial_term(const WeightedHypergraph& w, const Matrix& m, int order, double mu);

MlePolynomialTerms mle_polynomial_terms(const WeightedHypergraph& w, const Partition& partition, double mu);

}  // namespace hgclust
