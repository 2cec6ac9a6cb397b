#include "hgclust/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hgclust/rng.hpp"

namespace hgclust {

Partition::Partition(std::vector<int> labels, int k, bool outliers)
    : labels_(std::move(labels)), k_(k), outliers_(outliers) {
  if (k_ < 1) throw std::invalid_argument("partition needs k >= 1");
  const int max_label = outliers_ ? k_ + 1 : k_;
  for (int label : labels_) {
    if (label < 1 || label > max_label) {
      throw std::invalid_argument("partition label " + std::to_string(label) + " outside [1, " +
                                  std::to_string(max_label) + "]");
    }
  }
}

std::vector<Index> Partition::sizes() const {
  std::vector<Index> s(static_cast<std::size_t>(k_), 0);
  for (int label : labels_) {
    if (label <= k_) ++s[static_cast<std::size_t>(label - 1)];
  }
  return s;
}

Index Partition::outlier_count() const {
  return static_cast<Index>(std::count(labels_.begin(), labels_.end(), k_ + 1));
}

Index Partition::s_min() const {
  const auto s = sizes();
  return *std::min_element(s.begin(), s.end());
}

Index Partition::s_max() const {
  const auto s = sizes();
  return *std::max_element(s.begin(), s.end());
}

bool Partition::is_homogeneous(std::span<const Index> edge) const {
  const int first = label(edge[0]);
  if (first > k_) return false;
  for (std::size_t j = 1; j < edge.size(); ++j) {
    if (label(edge[j]) != first) return false;
  }
  return true;
}

Matrix Partition::membership() const {
  Matrix z = Matrix::Zero(n(), k_);
  for (Index i = 0; i < n(); ++i) {
    if (label(i) <= k_) z(i, label(i) - 1) = 1.0;
  }
  return z;
}

Matrix Partition::cluster_matrix() const {
  Matrix x = Matrix::Zero(n(), n());
  for (Index i = 0; i < n(); ++i) {
    if (label(i) > k_) continue;
    for (Index j = 0; j < n(); ++j) {
      if (label(j) == label(i)) x(i, j) = 1.0;
    }
  }
  return x;
}

Partition make_partition(std::span<const Index> sizes, Index n_outliers) {
  if (sizes.empty()) throw std::invalid_argument("make_partition: no communities");
  if (n_outliers < 0) throw std::invalid_argument("make_partition: negative outlier count");
  std::vector<int> labels;
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    if (sizes[a] < 1) throw std::invalid_argument("make_partition: community sizes must be >= 1");
    labels.insert(labels.end(), static_cast<std::size_t>(sizes[a]), static_cast<int>(a) + 1);
  }
  const int k = static_cast<int>(sizes.size());
  labels.insert(labels.end(), static_cast<std::size_t>(n_outliers), k + 1);
  return Partition(std::move(labels), k, n_outliers > 0);
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("model: n must be >= 1");
  if (d < 2) throw std::invalid_argument("model: d must be >= 2");
  if (d > n) throw std::invalid_argument("model: d must not exceed n");
  if (k < 1 || k > n) throw std::invalid_argument("model: k must lie in [1, n]");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("model: p must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("model: q must lie in [0, 1]");
}

// ---------------------------------------------------------------------------

WeightedHypergraph::WeightedHypergraph(Index n, int d) : n_(n), d_(d) {
  if (n < 1) throw std::invalid_argument("hypergraph: n must be >= 1");
  if (d < 2) throw std::invalid_argument("hypergraph: d must be >= 2");
  if (d > n) throw std::invalid_argument("hypergraph: d must not exceed n");
}

std::uint64_t WeightedHypergraph::slot_count() const { return binomial_exact(n_, d_); }

double WeightedHypergraph::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

void WeightedHypergraph::add_edge(std::span<const Index> tuple, double weight) {
  if (static_cast<int>(tuple.size()) != d_) throw std::invalid_argument("edge has wrong cardinality");
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    if (tuple[j] < 0 || tuple[j] >= n_) throw std::invalid_argument("edge node index out of range");
    if (j > 0 && tuple[j - 1] >= tuple[j]) {
      throw std::invalid_argument("edge nodes must be distinct and strictly increasing");
    }
  }
  if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("edge weight outside [0, 1]");
  const std::uint64_t r = colex_rank(tuple);
  if (!ranks_.empty() && r <= ranks_.back()) {
    throw std::invalid_argument(r == ranks_.back() ? "duplicate edge" : "edges appended out of rank order");
  }
  nodes_.insert(nodes_.end(), tuple.begin(), tuple.end());
  weights_.push_back(weight);
  ranks_.push_back(r);
}

WeightedHypergraph WeightedHypergraph::from_edges(
    Index n, int d, std::vector<std::pair<std::vector<Index>, double>> edges) {
  WeightedHypergraph h(n, d);
  std::vector<std::pair<std::uint64_t, std::size_t>> order;
  order.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto& tuple = edges[e].first;
    if (static_cast<int>(tuple.size()) != d) throw std::invalid_argument("edge has wrong cardinality");
    std::sort(tuple.begin(), tuple.end());
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      if (tuple[j] < 0 || tuple[j] >= n) throw std::invalid_argument("edge node index out of range");
      if (j > 0 && tuple[j - 1] == tuple[j]) throw std::invalid_argument("edge has repeated node");
    }
    order.emplace_back(colex_rank(tuple), e);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [rank, e] : order) h.add_edge(edges[e].first, edges[e].second);
  return h;
}

double WeightedHypergraph::weight_of_rank(std::uint64_t rank) const {
  const auto it = std::lower_bound(ranks_.begin(), ranks_.end(), rank);
  if (it == ranks_.end() || *it != rank) return 0.0;
  return weights_[static_cast<std::size_t>(it - ranks_.begin())];
}

std::uint64_t ObservedHypergraph::observed_count() const {
  return static_cast<std::uint64_t>(std::count(observed_mask.begin(), observed_mask.end(), true));
}

// ---------------------------------------------------------------------------

namespace {

// One independent draw per slot, keyed by the slot's colex rank.
WeightedHypergraph sample_slots(const ModelParams& params, const Partition& partition) {
  WeightedHypergraph h(params.n, params.d);
  const CounterRng rng(params.seed);
  for_each_subset(params.n, params.d, [&](std::span<const Index> tuple, std::uint64_t rank) {
    const double mean = partition.is_homogeneous(tuple) ? params.p : params.q;
    double w = 0.0;
    if (params.weight_law == WeightLaw::constant) {
      w = mean;
    } else if (rng.uniform(kStreamEdgeWeight, rank) < mean) {
      w = 1.0;
    }
    if (w > 0.0) h.add_edge(tuple, w);
  });
  return h;
}

}  // namespace

WeightedHypergraph sample_whsbm(const ModelParams& params, const Partition& partition) {
  params.validate();
  if (partition.n() != params.n) throw std::invalid_argument("sample_whsbm: partition size != n");
  if (partition.outlier_count() > 0) throw std::invalid_argument("sample_whsbm: partition has outliers");
  return sample_slots(params, partition);
}

WeightedHypergraph sample_whpcm(const ModelParams& params, const Partition& partition) {
  params.validate();
  if (partition.n() != params.n) throw std::invalid_argument("sample_whpcm: partition size != n");
  const auto sizes = partition.sizes();
  const bool any_inliers = std::any_of(sizes.begin(), sizes.end(), [](Index s) { return s > 0; });
  if (any_inliers && !partition.is_balanced()) {
    throw std::invalid_argument("sample_whpcm: communities must be equal-sized");
  }
  return sample_slots(params, partition);
}

PlantedClique sample_planted_clique(Index n, Index s, int d, std::uint64_t seed) {
  if (s < d) throw std::invalid_argument("planted clique: clique size must be >= d");
  if (s > n) throw std::invalid_argument("planted clique: clique size must be <= n");
  const Index sizes[] = {s};
  Partition partition = make_partition(sizes, n - s);
  ModelParams params{.n = n, .d = d, .k = 1, .p = 1.0, .q = 0.5,
                     .weight_law = WeightLaw::bernoulli, .seed = seed};
  return {sample_whpcm(params, partition), std::move(partition)};
}

ObservedHypergraph partial_observe(const WeightedHypergraph& w, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("partial_observe: eps outside [0, 1]");
  ObservedHypergraph obs{WeightedHypergraph(w.n(), w.d()), std::vector<bool>(w.slot_count(), false)};
  const CounterRng rng(seed);
  for (std::uint64_t r = 0; r < obs.observed_mask.size(); ++r) {
    obs.observed_mask[r] = rng.uniform(kStreamObservation, r) < eps;
  }
  for (std::size_t e = 0; e < w.edge_count(); ++e) {
    if (obs.observed_mask[w.rank(e)] && w.weight(e) > 0.0) obs.observed.add_edge(w.nodes(e), w.weight(e));
  }
  return obs;
}

WeightedHypergraph zero_impute(const ObservedHypergraph& obs) { return obs.observed; }

WeightedHypergraph complement(const WeightedHypergraph& w) {
  WeightedHypergraph out(w.n(), w.d());
  std::size_t e = 0;
  for_each_subset(w.n(), w.d(), [&](std::span<const Index> tuple, std::uint64_t rank) {
    double weight = 0.0;
    if (e < w.edge_count() && w.rank(e) == rank) weight = w.weight(e++);
    const double flipped = 1.0 - weight;
    if (flipped > 0.0) out.add_edge(tuple, flipped);
  });
  return out;
}

}  // namespace hgclust
