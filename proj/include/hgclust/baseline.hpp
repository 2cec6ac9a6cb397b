#pragma once

#include <cstdint>

#include "hgclust/model.hpp"

namespace hgclust {

/// Spectral clustering reference: top-k eigenvectors of A, rows scaled to unit
/// length, then k-means (k-means++ seeding, Lloyd iterations, best of
/// `restarts`). Labels are canonicalized by first appearance.
Partition spectral_baseline(const Matrix& a, int k, int restarts = 10, std::uint64_t seed = 0);

struct KMeansResult {
  std::vector<int> labels;  // 0-based cluster index per row
  double inertia = 0.0;
};

/// Seeded k-means over the rows of x.
KMeansResult kmeans_rows(const Matrix& x, int k, int restarts, std::uint64_t seed, int max_iter = 300);

}  // namespace hgclust
