#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "hgclust/concentration.hpp"
#include "hgclust/similarity.hpp"
#include "hgclust/tune.hpp"

using namespace hgclust;

namespace {

ModelParams grid_point(Index n, int d, double mu) {
  return {.n = n, .d = d, .k = 1, .p = mu, .q = mu, .weight_law = WeightLaw::bernoulli, .seed = 0};
}

}  // namespace

TEST_SUITE("concentration") {

TEST_CASE("constant law has zero deviation") {
  const Index sizes[] = {4, 4};
  const ModelParams prm{.n = 8, .d = 3, .k = 2, .p = 0.7, .q = 0.3, .weight_law = WeightLaw::constant, .seed = 0};
  const Partition truth = make_partition(sizes);
  const auto w = sample_whsbm(prm, truth);
  CHECK(spectral_deviation(w, expected_similarity(prm, truth).matrix) <= 1e-12);

  auto grid = grid_point(20, 3, 0.5);
  grid.weight_law = WeightLaw::constant;
  const auto reports = verify_bound({grid}, 3, 1);
  for (double r : reports[0].ratios()) CHECK(r <= 1e-12);
}

TEST_CASE("single edge, d = 2") {
  const auto w = WeightedHypergraph::from_edges(5, 2, {{{1, 3}, 1.0}});
  CHECK(spectral_deviation(w, Matrix::Zero(5, 5)) == doctest::Approx(1.0));
}

TEST_CASE("deviation is relabeling invariant and bounds the Weyl gap") {
  std::mt19937_64 rng(8);
  const Index sizes[] = {6, 6};
  const Partition truth = make_partition(sizes);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ModelParams prm{.n = 12, .d = 3, .k = 2, .p = 0.6, .q = 0.3, .weight_law = WeightLaw::bernoulli, .seed = seed};
    const Matrix a = build_similarity(sample_whsbm(prm, truth));
    const Matrix ea = expected_similarity(prm, truth).matrix;
    const double dev = spectral_deviation(a, ea);
    CHECK(weyl_gap(a, ea) <= dev + 1e-9);

    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> pm(12);
    for (int i = 0; i < 12; ++i) pm.indices()[i] = perm[i];
    const Matrix pa = pm * a * pm.transpose();
    const Matrix pea = pm * ea * pm.transpose();
    CHECK(spectral_deviation(pa, pea) == doctest::Approx(dev).epsilon(1e-10));
  }
}

TEST_CASE("hypothesis and scale") {
  CHECK(concentration_hypothesis(40, 3, 0.5));
  CHECK_FALSE(concentration_hypothesis(10, 2, 0.01));
  CHECK(deviation_scale(40, 3, 0.5) == doctest::Approx(std::sqrt(40 * 38 * 0.5)));
  const auto reports = verify_bound({grid_point(10, 2, 0.01)}, 5, 1);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].skipped);
  CHECK_FALSE(reports[0].warning.empty());
  CHECK(reports[0].results.empty());
}

TEST_CASE("n = 40, d = 3, mu = 0.5: ratio below 4 in every trial") {
  const auto reports = verify_bound({grid_point(40, 3, 0.5)}, 20, 2024);
  REQUIRE(reports.size() == 1);
  const auto& rep = reports[0];
  CHECK(rep.results.size() == 20);
  for (const auto& t : rep.results) {
    CHECK(t.ratio >= 0.0);
    CHECK(t.ratio < 4.0);
    CHECK(t.weyl <= t.deviation + 1e-9);
  }
  const auto ratios = rep.ratios();
  CHECK(rep.max_ratio == *std::max_element(ratios.begin(), ratios.end()));
}

TEST_CASE("graph case: ratio below 3") {
  const auto reports = verify_bound({grid_point(50, 2, 0.5), grid_point(100, 2, 0.5), grid_point(200, 2, 0.5)}, 5, 3);
  for (const auto& rep : reports) CHECK(rep.max_ratio < 3.0);
}

TEST_CASE("verify_bound is deterministic and independent of the worker count") {
  const std::vector<ModelParams> grid{grid_point(20, 3, 0.4), grid_point(24, 3, 0.3)};
  const auto a = verify_bound(grid, 4, 5, 1);
  const auto b = verify_bound(grid, 4, 5, 3);
  std::ostringstream x, y;
  write_concentration_csv(x, a);
  write_concentration_csv(y, b);
  const std::string csv = x.str();
  CHECK(csv == y.str());
  CHECK(csv.rfind("n,d,mu,trial,deviation,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

}
