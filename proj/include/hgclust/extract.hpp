#pragma once

#include <cstdint>
#include <vector>

#include "hgclust/model.hpp"
#include "hgclust/sdp.hpp"

namespace hgclust {

struct KMedoidsConfig {
  int restarts = 10;
  int max_iter = 100;
  std::uint64_t seed = 0;
};

struct KMedoidsResult {
  Partition labels;
  std::vector<Index> medoids;  // row index of each label's medoid
  double cost = 0.0;
  /// Cost after every assignment step, one list per restart.
  std::vector<std::vector<double>> cost_traces;
};

/// l1 k-medoids over the rows of `x`: alternating assignment/medoid updates
/// with a best-swap (PAM) step whenever the alternation stalls. Labels are
/// canonicalized by first appearance.
KMedoidsResult kmedoids_rows(const Matrix& x, int k, const KMedoidsConfig& cfg = {});

/// Rounds a relaxed cluster matrix to `clusters` groups via kmedoids_rows.
Partition round_solution(const SdpSolution& sol, int clusters, const KMedoidsConfig& cfg = {});

/// (1/n) min over label bijections of the number of disagreements. Computed
/// by maximum-weight assignment on the (square-padded) confusion matrix.
double misclustering_error(const Partition& estimate, const Partition& truth);

/// Hungarian method: maximizes sum_i weight(i, assignment[i]) over permutations.
std::vector<int> max_weight_assignment(const Matrix& weight);

struct ClusteringResult {
  Partition partition;
  SdpSolution solution;
};

/// similarity -> penalized relaxation -> k-medoids rounding.
ClusteringResult crtmle(const WeightedHypergraph& w, int k, double lambda,
                        const SolverConfig& solver = {}, const KMedoidsConfig& rounding = {});
ClusteringResult crtmle_from_similarity(const Matrix& a, int k, double lambda,
                                        const SolverConfig& solver = {}, const KMedoidsConfig& rounding = {});

/// Outlier-robust variant: constrained relaxation with Trace = k s and
/// <1, X> = k s^2; rounds to k + 1 groups when outliers are possible.
ClusteringResult crtmle_constrained(const Matrix& a, int k, Index s,
                                    const SolverConfig& solver = {}, const KMedoidsConfig& rounding = {});

}  // namespace hgclust
