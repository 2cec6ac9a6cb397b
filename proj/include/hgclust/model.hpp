#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hgclust/combinatorics.hpp"

namespace hgclust {

using Matrix = Eigen::MatrixXd;

/// Community assignment of n nodes. Labels are 1-based; with outliers enabled,
/// label k + 1 marks a node that belongs to no community.
class Partition {
 public:
  Partition() = default;
  /// Validates every label against k (and k + 1 when `outliers` is set).
  Partition(std::vector<int> labels, int k, bool outliers = false);

  Index n() const { return static_cast<Index>(labels_.size()); }
  int k() const { return k_; }
  bool allows_outliers() const { return outliers_; }
  int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

  /// Community sizes s_1..s_k; outliers are excluded.
  std::vector<Index> sizes() const;
  Index outlier_count() const;
  Index s_min() const;
  Index s_max() const;
  bool is_balanced() const { return s_min() == s_max(); }

  /// True iff all nodes of `edge` carry one label a <= k.
  bool is_homogeneous(std::span<const Index> edge) const;

  /// n x k membership matrix; outlier rows are zero.
  Matrix membership() const;
  /// Cluster matrix Z Z^T.
  Matrix cluster_matrix() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
  bool outliers_ = false;
};

/// Contiguous partition: community 1 gets the first sizes[0] nodes, and so on;
/// outliers come last with label k + 1.
Partition make_partition(std::span<const Index> sizes, Index n_outliers = 0);

enum class WeightLaw { bernoulli, constant };

struct ModelParams {
  Index n = 0;
  int d = 2;
  int k = 1;
  double p = 0.0;
  double q = 0.0;
  WeightLaw weight_law = WeightLaw::bernoulli;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Sparse weighted d-uniform hypergraph. Edges are kept in strictly increasing
/// colex rank of their (sorted, 0-based) node tuples; absent tuples weigh zero.
class WeightedHypergraph {
 public:
  WeightedHypergraph() = default;
  WeightedHypergraph(Index n, int d);

  /// Builds from unsorted edges; tuples are sorted, validated and deduplicated
  /// (a duplicate tuple is an error).
  static WeightedHypergraph from_edges(Index n, int d,
                                       std::vector<std::pair<std::vector<Index>, double>> edges);

  Index n() const { return n_; }
  int d() const { return d_; }
  std::size_t edge_count() const { return weights_.size(); }
  /// Number of d-subsets of [n].
  std::uint64_t slot_count() const;

  std::span<const Index> nodes(std::size_t e) const {
    return {nodes_.data() + e * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double weight(std::size_t e) const { return weights_[e]; }
  std::uint64_t rank(std::size_t e) const { return ranks_[e]; }
  double total_weight() const;

  /// Appends an edge whose rank exceeds every stored rank.
  void add_edge(std::span<const Index> tuple, double weight);

  /// Weight of the tuple with the given colex rank (0 when absent).
  double weight_of_rank(std::uint64_t rank) const;

  bool operator==(const WeightedHypergraph&) const = default;

 private:
  Index n_ = 0;
  int d_ = 2;
  std::vector<Index> nodes_;
  std::vector<double> weights_;
  std::vector<std::uint64_t> ranks_;
};

/// Hypergraph with a per-slot observation mask; unobserved slots carry no weight.
struct ObservedHypergraph {
  WeightedHypergraph observed;      // weights of observed slots (zeros omitted)
  std::vector<bool> observed_mask;  // indexed by colex rank

  std::uint64_t observed_count() const;
};

WeightedHypergraph sample_whsbm(const ModelParams& params, const Partition& partition);
WeightedHypergraph sample_whpcm(const ModelParams& params, const Partition& partition);

struct PlantedClique {
  WeightedHypergraph hypergraph;
  Partition partition;  // one community (the clique) plus n - s outliers
};
PlantedClique sample_planted_clique(Index n, Index s, int d, std::uint64_t seed);

ObservedHypergraph partial_observe(const WeightedHypergraph& w, double eps, std::uint64_t seed);
WeightedHypergraph zero_impute(const ObservedHypergraph& obs);
WeightedHypergraph complement(const WeightedHypergraph& w);

}  // namespace hgclust
