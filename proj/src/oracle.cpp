#include "hgclust/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hgclust {

namespace {

void check_size(Index n) {
  if (n > kOracleMaxNodes) throw std::invalid_argument("oracle refuses n > 10 (combinatorial blow-up)");
}

void extend(std::vector<int>& labels, std::size_t pos, int used, int k,
            const std::function<void(const std::vector<int>&)>& fn) {
  if (pos == labels.size()) {
    fn(labels);
    return;
  }
  const int limit = std::min(k, used + 1);
  for (int label = 1; label <= limit; ++label) {
    labels[pos] = label;
    extend(labels, pos + 1, std::max(used, label), k, fn);
  }
}

}  // namespace

MleConfig MleConfig::make(double p, double q) {
  if (!(0.0 < q && q < p && p < 1.0)) throw std::invalid_argument("MleConfig: need 0 < q < p < 1");
  const double num = std::log(1.0 - q) - std::log(1.0 - p);
  const double den = std::log(p) + std::log(1.0 - q) - std::log(q) - std::log(1.0 - p);
  return {p, q, num / den};
}

void for_each_partition(Index n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (n < 1 || k < 1) return;
  std::vector<int> labels(static_cast<std::size_t>(n), 1);
  extend(labels, 1, 1, k, fn);
}

Partition brute_force_mle(const WeightedHypergraph& w, int k, const MleConfig& cfg) {
  check_size(w.n());
  if (k < 1) throw std::invalid_argument("brute_force_mle: k must be >= 1");
  struct Slot {
    std::vector<Index> nodes;
    double centered;  // W_e - mu
  };
  std::vector<Slot> slots;
  for_each_subset(w.n(), w.d(), [&](std::span<const Index> tuple, std::uint64_t rank) {
    const double weight = w.weight_of_rank(rank);
    if (weight != 0.0 && weight != 1.0) throw std::invalid_argument("brute_force_mle: weights must be binary");
    slots.push_back({std::vector<Index>(tuple.begin(), tuple.end()), weight - cfg.mu});
  });

  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  for_each_partition(w.n(), k, [&](const std::vector<int>& labels) {
    double value = 0.0;
    for (const auto& slot : slots) {
      bool homogeneous = true;
      for (std::size_t j = 1; j < slot.nodes.size() && homogeneous; ++j) {
        homogeneous = labels[slot.nodes[j]] == labels[slot.nodes[0]];
      }
      if (homogeneous) value += slot.centered;
    }
    if (value > best) {
      best = value;
      best_labels = labels;
    }
  });
  return Partition(std::move(best_labels), k);
}

TruncatedOptimum brute_force_truncated(const Matrix& a, int k, double lambda) {
  const Index n = static_cast<Index>(a.rows());
  check_size(n);
  if (k < 1) throw std::invalid_argument("brute_force_truncated: k must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  for_each_partition(n, k, [&](const std::vector<int>& labels) {
    double value = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (labels[i] == labels[j]) value += a(i, j) - lambda;
      }
    }
    if (value > best) {
      best = value;
      best_labels = labels;
    }
  });
  return {Partition(std::move(best_labels), k), best};
}

double mle_polynomial_term(const WeightedHypergraph& w, const Matrix& m, int order, double mu) {
  check_size(w.n());
  if (order < 0 || order > w.d()) throw std::invalid_argument("mle_polynomial_term: order outside [0, d]");
  if (m.rows() != w.n()) throw std::invalid_argument("mle_polynomial_term: matrix has wrong row count");
  double total = 0.0;
  for_each_subset(w.n(), w.d(), [&](std::span<const Index> edge, std::uint64_t rank) {
    const double coeff = w.weight_of_rank(rank) - mu;
    // Sum over order-subsets I of the edge of sum_j prod_{i in I} M_ij.
    double inner = 0.0;
    for_each_subset(static_cast<Index>(edge.size()), order, [&](std::span<const Index> pick, std::uint64_t) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double prod = 1.0;
        for (Index idx : pick) prod *= m(edge[idx], j);
        inner += prod;
      }
    });
    total += coeff * inner;
  });
  return total;
}

MlePolynomialTerms mle_polynomial_terms(const WeightedHypergraph& w, const Partition& partition, double mu) {
  if (partition.n() != w.n()) throw std::invalid_argument("mle_polynomial_terms: partition size != n");
  const Matrix z = partition.membership();
  const Matrix y = (2.0 * z).array() - 1.0;
  return {mle_polynomial_term(w, y, 0, mu), mle_polynomial_term(w, y, 1, mu), mle_polynomial_term(w, y, 2, mu),
          mle_polynomial_term(w, z, 2, mu)};
}

}  // namespace hgclust
