#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "hgclust/extract.hpp"
#include "hgclust/model.hpp"

namespace hgclust {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  Partition truth;  // generating line per point
};

struct SubspaceConfig {
  int k = 3;
  std::vector<Index> sizes{8, 8, 8};  // points per line
  double sigma = 0.0;                 // per-coordinate noise standard deviation
  std::uint64_t seed = 0;

  void validate() const;
};

/// Lines through the origin with uniformly random unit directions; each point
/// is t * direction + N(0, sigma^2 I) with t ~ U[-1, 1].
PointCloud generate_lines(const SubspaceConfig& cfg);

/// Collinearity residual of three points: the second singular value of the
/// mean-centered 3 x 3 point matrix (the third is always zero).
double triple_fitness(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

/// Residuals of all triples in colex order.
std::vector<double> triple_residuals(const PointCloud& cloud, unsigned jobs = 1);

/// Twice the 5th percentile of the triple residuals, floored at 1e-9 times
/// the RMS distance of the points from their centroid.
double default_bandwidth(const PointCloud& cloud, unsigned jobs = 1);

/// 3-uniform hypergraph over all triples with weight exp(-r^2 / (2 h^2)),
/// r = triple_fitness. Weights lie in (0, 1]; residuals below 1e-12 map to 1.
WeightedHypergraph triple_weights(const PointCloud& cloud, double bandwidth, unsigned jobs = 1);

/// Midpoint of the first and third quartile of the off-diagonal entries of A.
double quartile_lambda(const Matrix& a);

struct SubspaceResult {
  PointCloud cloud;
  Matrix similarity;
  double lambda = 0.0;
  bool balanced = false;
  ClusteringResult clustering;
  double err = 0.0;
};

/// generate_lines -> triple_weights -> penalized relaxation. lambda comes from
/// the spectral estimator when the sizes are equal, else from quartile_lambda.
/// bandwidth <= 0 selects default_bandwidth.
SubspaceResult subspace_cluster(const SubspaceConfig& cfg, double bandwidth = 0.0, const SolverConfig& solver = {},
                                const KMedoidsConfig& rounding = {}, unsigned jobs = 1);

struct SubspaceTrial {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double crtmle_err = 0.0;
  double spectral_err = 0.0;
};

/// Paired CRTMLE / spectral-baseline runs on `trials` clouds seeded from cfg.seed.
std::vector<SubspaceTrial> run_subspace_trials(const SubspaceConfig& cfg, int trials, double bandwidth = 0.0,
                                               const SolverConfig& solver = {}, const KMedoidsConfig& rounding = {},
                                               int baseline_restarts = 10, unsigned jobs = 1);

/// CSV with header x,y,z,label.
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace hgclust
