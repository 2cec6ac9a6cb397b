#pragma once

#include "hgclust/model.hpp"

namespace hgclust {

/// A_ij = sum of W_e over edges containing both i and j (i != j); A_ii = 0.
Matrix build_similarity(const WeightedHypergraph& w);

/// Expected similarities between and within communities.
struct SimilarityProfile {
  Matrix delta;          // k x k
  double p_minus = 0.0;  // minimum within-community expected similarity
  double q_plus = 0.0;   // maximum cross-community expected similarity
};

struct ExpectedSimilarity {
  Matrix matrix;  // E[A], n x n
  SimilarityProfile profile;
};

/// Closed-form E[A] under the block model. Outlier nodes (label k + 1) see
/// only heterogeneous edges.
ExpectedSimilarity expected_similarity(const ModelParams& params, const Partition& partition);

/// Within/cross expected similarity for one community of size s.
double within_similarity(Index n, int d, Index s, double p, double q);
double cross_similarity(Index n, int d, double q);

struct RecoveryCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// s_min^2 C(s_min-2, d-2)^2 (p-q)^2 >= c1 C(n-2, d-2) p (s_min log n + n).
/// Diagnostic only.
RecoveryCheck recovery_condition(const ModelParams& params, Index s_min, double c1 = 1.0);

struct LambdaWindow {
  double low = 0.0;
  double high = 0.0;
  double mid() const { return 0.5 * (low + high); }
};

/// [c p^- + (1-c) q^+, (1-c) p^- + c q^+] with c in (0, 1/2]; default c = 1/4.
LambdaWindow lambda_window(const SimilarityProfile& profile, double c = 0.25);
LambdaWindow lambda_window(double p_minus, double q_plus, double c = 0.25);

/// Throws std::invalid_argument unless `a` is square, finite, symmetric with zero diagonal.
void check_similarity(const Matrix& a);

}  // namespace hgclust
