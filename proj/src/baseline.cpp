#include "hgclust/baseline.hpp"

#include <limits>
#include <random>
#include <stdexcept>

#include "hgclust/rng.hpp"
#include "hgclust/sdp.hpp"

namespace hgclust {

namespace {

KMeansResult lloyd(const Matrix& x, int k, std::mt19937_64& rng, int max_iter) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());

  // k-means++ seeding.
  centers.row(0) = x.row(std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng));
  Eigen::VectorXd nearest = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Eigen::Index pick = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    if (total > 0.0) {
      double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (nearest(i) <= 0.0) continue;
        pick = i;
        target -= nearest(i);
        if (target < 0.0) break;
      }
    }
    centers.row(c) = x.row(pick);
    nearest = nearest.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  KMeansResult res{std::vector<int>(static_cast<std::size_t>(n), -1), 0.0};
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    res.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best_c = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double v = (x.row(i) - centers.row(c)).squaredNorm();
        if (v < best) {
          best = v;
          best_c = c;
        }
      }
      if (res.labels[i] != best_c) changed = true;
      res.labels[i] = best_c;
      res.inertia += best;
    }
    if (!changed) break;
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.labels[i]) += x.row(i);
      ++counts[res.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      // An emptied cluster keeps its previous center.
      if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
    }
  }
  return res;
}

}  // namespace

KMeansResult kmeans_rows(const Matrix& x, int k, int restarts, std::uint64_t seed, int max_iter) {
  if (k < 1 || k > x.rows()) throw std::invalid_argument("kmeans_rows: need 1 <= k <= n");
  if (restarts < 1) throw std::invalid_argument("kmeans_rows: restarts must be >= 1");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    KMeansResult res = lloyd(x, k, rng, max_iter);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

Partition spectral_baseline(const Matrix& a, int k, int restarts, std::uint64_t seed) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("spectral_baseline: matrix must be square");
  if (k < 1 || k > n) throw std::invalid_argument("spectral_baseline: need 1 <= k <= n");
  std::vector<int> labels(static_cast<std::size_t>(n));
  if (k == n) {
    for (Eigen::Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i) + 1;
    return Partition(std::move(labels), k);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  // Eigen sorts ascending; the top-k block is the last k columns.
  Matrix emb = es.eigenvectors().rightCols(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = emb.row(i).norm();
    if (norm > 0.0) emb.row(i) /= norm;
  }
  const KMeansResult km = kmeans_rows(emb, k, restarts, seed);

  std::vector<int> relabel(static_cast<std::size_t>(k), 0);
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int& slot = relabel[km.labels[i]];
    if (slot == 0) slot = ++next;
    labels[i] = slot;
  }
  return Partition(std::move(labels), k);
}

}  // namespace hgclust
