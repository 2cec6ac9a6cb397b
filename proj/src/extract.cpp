#include "hgclust/extract.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "hgclust/rng.hpp"
#include "hgclust/similarity.hpp"

namespace hgclust {

namespace {

Matrix l1_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix dist = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (x.row(i) - x.row(j)).cwiseAbs().sum();
      dist(i, j) = v;
      dist(j, i) = v;
    }
  }
  return dist;
}

struct Assignment {
  std::vector<int> slot;  // medoid slot per point
  double cost = 0.0;
};

// Nearest medoid per point; ties go to the lowest slot.
Assignment assign(const Matrix& dist, const std::vector<Index>& medoids) {
  const Eigen::Index n = dist.rows();
  Assignment a{std::vector<int>(static_cast<std::size_t>(n), 0), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < medoids.size(); ++m) {
      const double v = dist(i, medoids[m]);
      if (v < best) {
        best = v;
        a.slot[i] = static_cast<int>(m);
      }
    }
    a.cost += best;
  }
  return a;
}

double total_cost(const Matrix& dist, const std::vector<Index>& medoids) {
  double cost = 0.0;
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index m : medoids) best = std::min(best, dist(i, m));
    cost += best;
  }
  return cost;
}

std::vector<Index> seed_medoids(const Matrix& dist, int k, std::mt19937_64& rng) {
  const Index n = static_cast<Index>(dist.rows());
  std::vector<Index> medoids;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  medoids.push_back(std::uniform_int_distribution<Index>(0, n - 1)(rng));
  used[medoids.back()] = true;
  std::vector<double> nearest(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) nearest[i] = dist(i, medoids[0]);
  while (static_cast<int>(medoids.size()) < k) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += used[i] ? 0.0 : nearest[i];
    Index pick = -1;
    if (total > 0.0) {
      double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (Index i = 0; i < n; ++i) {
        if (used[i] || nearest[i] <= 0.0) continue;
        pick = i;
        target -= nearest[i];
        if (target < 0.0) break;
      }
    }
    if (pick < 0) {
      for (Index i = 0; i < n && pick < 0; ++i) {
        if (!used[i]) pick = i;
      }
    }
    medoids.push_back(pick);
    used[pick] = true;
    for (Index i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], dist(i, pick));
  }
  return medoids;
}

// Member of the cluster minimizing the summed distance to the other members.
bool update_medoids(const Matrix& dist, const Assignment& a, std::vector<Index>& medoids) {
  bool changed = false;
  const Index n = static_cast<Index>(dist.rows());
  for (std::size_t m = 0; m < medoids.size(); ++m) {
    double best = std::numeric_limits<double>::infinity();
    Index best_row = medoids[m];
    for (Index j = 0; j < n; ++j) {
      if (a.slot[j] != static_cast<int>(m)) continue;
      double sum = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (a.slot[i] == static_cast<int>(m)) sum += dist(i, j);
      }
      if (sum < best) {
        best = sum;
        best_row = j;
      }
    }
    if (best_row != medoids[m]) {
      // Only move when strictly better than the current medoid.
      double current = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (a.slot[i] == static_cast<int>(m)) current += dist(i, medoids[m]);
      }
      if (best < current) {
        medoids[m] = best_row;
        changed = true;
      }
    }
  }
  return changed;
}

// Best single medoid/non-medoid swap; returns false when nothing improves.
bool best_swap(const Matrix& dist, std::vector<Index>& medoids, double current_cost) {
  const Index n = static_cast<Index>(dist.rows());
  const double slack = 1e-12 * std::max(1.0, current_cost);
  double best_cost = current_cost - slack;
  std::size_t best_slot = 0;
  Index best_row = -1;
  std::vector<bool> is_medoid(static_cast<std::size_t>(n), false);
  for (Index m : medoids) is_medoid[m] = true;
  std::vector<Index> trial = medoids;
  for (std::size_t m = 0; m < medoids.size(); ++m) {
    for (Index o = 0; o < n; ++o) {
      if (is_medoid[o]) continue;
      trial[m] = o;
      const double c = total_cost(dist, trial);
      if (c < best_cost) {
        best_cost = c;
        best_slot = m;
        best_row = o;
      }
    }
    trial[m] = medoids[m];
  }
  if (best_row < 0) return false;
  medoids[best_slot] = best_row;
  return true;
}

}  // namespace

KMedoidsResult kmedoids_rows(const Matrix& x, int k, const KMedoidsConfig& cfg) {
  const Index n = static_cast<Index>(x.rows());
  if (k < 1) throw std::invalid_argument("kmedoids: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmedoids: k must not exceed the number of rows");
  if (cfg.restarts < 1) throw std::invalid_argument("kmedoids: restarts must be >= 1");
  const Matrix dist = l1_distances(x);

  KMedoidsResult best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<Index> best_medoids;
  Assignment best_assignment;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    std::vector<Index> medoids = seed_medoids(dist, k, rng);
    std::vector<double> trace;
    Assignment a = assign(dist, medoids);
    trace.push_back(a.cost);
    for (int it = 0; it < cfg.max_iter; ++it) {
      if (!update_medoids(dist, a, medoids) && !best_swap(dist, medoids, a.cost)) break;
      a = assign(dist, medoids);
      trace.push_back(a.cost);
    }
    best.cost_traces.push_back(std::move(trace));
    if (a.cost < best.cost) {
      best.cost = a.cost;
      best_medoids = medoids;
      best_assignment = a;
    }
  }

  // Canonical labels: first appearance order, unused medoids last.
  std::vector<int> slot_label(static_cast<std::size_t>(k), 0);
  int next = 1;
  for (Index i = 0; i < n; ++i) {
    const int slot = best_assignment.slot[i];
    if (slot_label[slot] == 0) slot_label[slot] = next++;
  }
  for (int m = 0; m < k; ++m) {
    if (slot_label[m] == 0) slot_label[m] = next++;
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[i] = slot_label[best_assignment.slot[i]];
  best.medoids.assign(static_cast<std::size_t>(k), 0);
  for (int m = 0; m < k; ++m) best.medoids[slot_label[m] - 1] = best_medoids[m];
  best.labels = Partition(std::move(labels), k);
  return best;
}

Partition round_solution(const SdpSolution& sol, int clusters, const KMedoidsConfig& cfg) {
  return kmedoids_rows(sol.x, clusters, cfg).labels;
}

std::vector<int> max_weight_assignment(const Matrix& weight) {
  const int n = static_cast<int>(weight.rows());
  if (weight.cols() != n) throw std::invalid_argument("assignment: matrix must be square");
  if (n == 0) return {};
  // Shortest augmenting path with potentials on cost = -weight (1-based internals).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

double misclustering_error(const Partition& estimate, const Partition& truth) {
  if (estimate.n() != truth.n()) throw std::invalid_argument("misclustering_error: partitions differ in length");
  const Index n = truth.n();
  if (n == 0) return 0.0;
  const auto& est = estimate.labels();
  const auto& tru = truth.labels();
  const int size = std::max(*std::max_element(est.begin(), est.end()), *std::max_element(tru.begin(), tru.end()));
  Matrix confusion = Matrix::Zero(size, size);
  for (Index i = 0; i < n; ++i) confusion(est[i] - 1, tru[i] - 1) += 1.0;
  const auto assignment = max_weight_assignment(confusion);
  double matched = 0.0;
  for (int a = 0; a < size; ++a) matched += confusion(a, assignment[a]);
  return (static_cast<double>(n) - matched) / static_cast<double>(n);
}

ClusteringResult crtmle_from_similarity(const Matrix& a, int k, double lambda, const SolverConfig& solver,
                                        const KMedoidsConfig& rounding) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("crtmle: lambda must be >= 0");
  SdpSolution sol = solve({a, PenalizedMode{lambda}}, solver);
  Partition p = round_solution(sol, k, rounding);
  return {std::move(p), std::move(sol)};
}

ClusteringResult crtmle(const WeightedHypergraph& w, int k, double lambda, const SolverConfig& solver,
                        const KMedoidsConfig& rounding) {
  return crtmle_from_similarity(build_similarity(w), k, lambda, solver, rounding);
}

ClusteringResult crtmle_constrained(const Matrix& a, int k, Index s, const SolverConfig& solver,
                                    const KMedoidsConfig& rounding) {
  const Index n = static_cast<Index>(a.rows());
  if (k < 1 || s < 1 || static_cast<long long>(k) * s > n) {
    throw std::invalid_argument("crtmle_constrained: need 1 <= k * s <= n");
  }
  SdpSolution sol = solve({a, balanced_constraints(k, s)}, solver);
  const bool has_outliers = static_cast<long long>(k) * s < n;
  if (!has_outliers) {
    Partition p = round_solution(sol, k, rounding);
    return {std::move(p), std::move(sol)};
  }
  // One extra group for the outliers: the one whose medoid row has the
  // smallest diagonal entry (outlier rows of the cluster matrix vanish).
  const KMedoidsResult km = kmedoids_rows(sol.x, k + 1, rounding);
  int outlier_label = 1;
  for (int label = 2; label <= k + 1; ++label) {
    const Index m = km.medoids[label - 1];
    if (sol.x(m, m) < sol.x(km.medoids[outlier_label - 1], km.medoids[outlier_label - 1])) outlier_label = label;
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const int l = km.labels.label(i);
    if (l == outlier_label) labels[i] = k + 1;
    else labels[i] = l < outlier_label ? l : l - 1;
  }
  return {Partition(std::move(labels), k, true), std::move(sol)};
}

}  // namespace hgclust
