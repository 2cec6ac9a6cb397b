#include "hgclust/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "hgclust/io.hpp"
#include "hgclust/parallel.hpp"
#include "hgclust/rng.hpp"
#include "hgclust/sdp.hpp"
#include "hgclust/similarity.hpp"
#include "hgclust/tune.hpp"

namespace hgclust {

namespace {

Partition near_equal_partition(Index n, int k) {
  std::vector<Index> sizes(static_cast<std::size_t>(k), n / k);
  for (Index i = 0; i < n % k; ++i) ++sizes[static_cast<std::size_t>(i)];
  return make_partition(sizes);
}

}  // namespace

double spectral_deviation(const Matrix& a, const Matrix& ea) {
  if (a.rows() != ea.rows() || a.cols() != ea.cols()) throw std::invalid_argument("spectral_deviation: shape mismatch");
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - ea, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_deviation(const WeightedHypergraph& w, const Matrix& ea) {
  return spectral_deviation(build_similarity(w), ea);
}

double weyl_gap(const Matrix& a, const Matrix& ea) {
  const auto la = sorted_eigenvalues(a);
  const auto le = sorted_eigenvalues(ea);
  double gap = 0.0;
  for (std::size_t i = 0; i < la.size(); ++i) gap = std::max(gap, std::abs(la[i] - le[i]));
  return gap;
}

bool concentration_hypothesis(Index n, int d, double mu) {
  return static_cast<double>(n) * binomial(n - 2, d - 2) * mu >= std::log(static_cast<double>(n));
}

double deviation_scale(Index n, int d, double mu) {
  return std::sqrt(static_cast<double>(n) * binomial(n - 2, d - 2) * mu);
}

std::vector<double> ConcentrationReport::ratios() const {
  std::vector<double> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.ratio);
  return out;
}

std::vector<ConcentrationReport> verify_bound(const std::vector<ModelParams>& grid, int trials,
                                              std::uint64_t seed, unsigned jobs) {
  if (trials < 0) throw std::invalid_argument("verify_bound: trials must be >= 0");
  std::vector<ConcentrationReport> reports(grid.size());
  std::vector<Partition> partitions(grid.size());
  std::vector<Matrix> expected(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const ModelParams& params = grid[g];
    params.validate();
    auto& rep = reports[g];
    rep.n = params.n;
    rep.d = params.d;
    rep.mu_n = std::max(params.p, params.q);
    rep.trials = trials;
    if (!concentration_hypothesis(params.n, params.d, rep.mu_n)) {
      rep.skipped = true;
      rep.warning = "n C(n-2,d-2) mu < log n at n=" + std::to_string(params.n) + ", d=" + std::to_string(params.d);
      continue;
    }
    partitions[g] = near_equal_partition(params.n, params.k);
    expected[g] = expected_similarity(params, partitions[g]).matrix;
    rep.results.resize(static_cast<std::size_t>(trials));
  }

  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t t = 0; t < reports[g].results.size(); ++t) work.emplace_back(g, t);
  }
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    const auto [g, t] = work[i];
    ModelParams params = grid[g];
    params.seed = derive_seed(seed, g, t);
    const Matrix a = build_similarity(sample_whsbm(params, partitions[g]));
    auto& trial = reports[g].results[t];
    trial.seed = params.seed;
    trial.deviation = spectral_deviation(a, expected[g]);
    trial.ratio = trial.deviation / deviation_scale(params.n, params.d, reports[g].mu_n);
    trial.weyl = weyl_gap(a, expected[g]);
  });

  for (auto& rep : reports) {
    for (const auto& r : rep.results) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  }
  return reports;
}

void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationReport>& reports) {
  out << "n,d,mu,trial,deviation,ratio\n";
  for (const auto& rep : reports) {
    for (std::size_t t = 0; t < rep.results.size(); ++t) {
      out << rep.n << ',' << rep.d << ',' << format_double(rep.mu_n) << ',' << t << ','
          << format_double(rep.results[t].deviation) << ',' << format_double(rep.results[t].ratio) << '\n';
    }
  }
}

}  // namespace hgclust
