#include "hgclust/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "hgclust/baseline.hpp"
#include "hgclust/io.hpp"
#include "hgclust/rng.hpp"
#include "hgclust/parallel.hpp"
#include "hgclust/similarity.hpp"
#include "hgclust/tune.hpp"

namespace hgclust {

void SubspaceConfig::validate() const {
  if (k < 1) throw std::invalid_argument("subspace: k must be >= 1");
  if (sizes.size() != static_cast<std::size_t>(k)) throw std::invalid_argument("subspace: need one size per line");
  for (Index s : sizes) {
    if (s < 1) throw std::invalid_argument("subspace: sizes must be positive");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("subspace: sigma must be >= 0");
}

PointCloud generate_lines(const SubspaceConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Eigen::Vector3d> dirs;
  for (int a = 0; a < cfg.k; ++a) {
    Eigen::Vector3d v;
    do {
      v = {gauss(rng), gauss(rng), gauss(rng)};
    } while (v.norm() < 1e-12);
    dirs.push_back(v.normalized());
  }

  PointCloud cloud;
  for (int a = 0; a < cfg.k; ++a) {
    for (Index i = 0; i < cfg.sizes[a]; ++i) {
      const double t = unit(rng);
      Eigen::Vector3d noise = Eigen::Vector3d::Zero();
      if (cfg.sigma > 0.0) noise = cfg.sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      cloud.points.push_back(t * dirs[a] + noise);
    }
  }
  cloud.truth = make_partition(cfg.sizes);
  return cloud;
}

double triple_fitness(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d mean = (a + b + c) / 3.0;
  Eigen::Matrix3d m;
  m.row(0) = (a - mean).transpose();
  m.row(1) = (b - mean).transpose();
  m.row(2) = (c - mean).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  return svd.singularValues()(1);
}

std::vector<double> triple_residuals(const PointCloud& cloud, unsigned jobs) {
  const Index n = static_cast<Index>(cloud.points.size());
  if (n < 3) return {};
  // Colex rank of {i < j < l} is C(i,1) + C(j,2) + C(l,3); slice by the largest node.
  std::vector<double> out(static_cast<std::size_t>(binomial_exact(n, 3)));
  parallel_for(static_cast<std::size_t>(n - 2), jobs, [&](std::size_t slice) {
    const Index l = static_cast<Index>(slice) + 2;
    std::size_t r = static_cast<std::size_t>(binomial_exact(l, 3));
    for (Index j = 1; j < l; ++j) {
      for (Index i = 0; i < j; ++i, ++r) out[r] = triple_fitness(cloud.points[i], cloud.points[j], cloud.points[l]);
    }
  });
  return out;
}

double default_bandwidth(const PointCloud& cloud, unsigned jobs) {
  if (cloud.points.empty()) throw std::invalid_argument("default_bandwidth: empty cloud");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : cloud.points) centroid += p;
  centroid /= static_cast<double>(cloud.points.size());
  double ss = 0.0;
  for (const auto& p : cloud.points) ss += (p - centroid).squaredNorm();
  const double floor = 1e-9 * std::max(std::sqrt(ss / static_cast<double>(cloud.points.size())), 1e-300);

  std::vector<double> res = triple_residuals(cloud, jobs);
  if (res.empty()) return std::max(floor, 1e-9);
  const auto nth = res.begin() + static_cast<std::ptrdiff_t>(0.05 * static_cast<double>(res.size() - 1));
  std::nth_element(res.begin(), nth, res.end());
  return std::max(2.0 * *nth, floor);
}

WeightedHypergraph triple_weights(const PointCloud& cloud, double bandwidth, unsigned jobs) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("triple_weights: bandwidth must be > 0");
  const Index n = static_cast<Index>(cloud.points.size());
  WeightedHypergraph h(n, 3);
  const std::vector<double> res = triple_residuals(cloud, jobs);
  const double denom = 2.0 * bandwidth * bandwidth;
  std::size_t r = 0;
  for_each_subset(n, 3, [&](std::span<const Index> tuple, std::uint64_t) {
    const double fit = res[r++];
    const double w = fit <= 1e-12 ? 1.0 : std::exp(-fit * fit / denom);
    h.add_edge(tuple, std::max(w, std::numeric_limits<double>::min()));
  });
  return h;
}

double quartile_lambda(const Matrix& a) {
  std::vector<double> vals;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < a.rows(); ++i) vals.push_back(a(i, j));
  }
  if (vals.empty()) return 0.0;
  std::sort(vals.begin(), vals.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(vals.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, vals.size() - 1);
    return vals[lo] + (pos - static_cast<double>(lo)) * (vals[hi] - vals[lo]);
  };
  return 0.5 * (quantile(0.25) + quantile(0.75));
}

SubspaceResult subspace_cluster(const SubspaceConfig& cfg, double bandwidth, const SolverConfig& solver,
                                const KMedoidsConfig& rounding, unsigned jobs) {
  SubspaceResult res;
  res.cloud = generate_lines(cfg);
  const Index n = res.cloud.truth.n();
  if (bandwidth <= 0.0) bandwidth = default_bandwidth(res.cloud, jobs);
  res.similarity = build_similarity(triple_weights(res.cloud, bandwidth, jobs));
  res.balanced = std::all_of(cfg.sizes.begin(), cfg.sizes.end(), [&](Index s) { return s == cfg.sizes.front(); });
  if (cfg.k == 1) {
    res.clustering.partition = Partition(std::vector<int>(static_cast<std::size_t>(n), 1), 1);
    res.err = misclustering_error(res.clustering.partition, res.cloud.truth);
    return res;
  }
  res.lambda = res.balanced && n >= 4 ? estimate(res.similarity, cfg.seed).lambda_hat : quartile_lambda(res.similarity);
  res.clustering = crtmle_from_similarity(res.similarity, cfg.k, res.lambda, solver, rounding);
  res.err = misclustering_error(res.clustering.partition, res.cloud.truth);
  return res;
}

std::vector<SubspaceTrial> run_subspace_trials(const SubspaceConfig& cfg, int trials, double bandwidth,
                                               const SolverConfig& solver, const KMedoidsConfig& rounding,
                                               int baseline_restarts, unsigned jobs) {
  cfg.validate();
  if (trials < 0) throw std::invalid_argument("subspace: trials must be >= 0");
  std::vector<SubspaceTrial> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), jobs, [&](std::size_t t) {
    SubspaceConfig trial_cfg = cfg;
    trial_cfg.seed = derive_seed(cfg.seed, t);
    KMedoidsConfig trial_rounding = rounding;
    trial_rounding.seed = derive_seed(trial_cfg.seed, rounding.seed);
    const SubspaceResult res = subspace_cluster(trial_cfg, bandwidth, solver, trial_rounding);
    const Partition base = spectral_baseline(res.similarity, cfg.k, baseline_restarts, trial_cfg.seed);
    out[t] = {trial_cfg.seed, res.lambda, res.err, misclustering_error(base, res.cloud.truth)};
  });
  return out;
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  out << "x,y,z,label\n";
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    out << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z()) << ','
        << cloud.truth.label(static_cast<Index>(i)) << '\n';
  }
}

}  // namespace hgclust
