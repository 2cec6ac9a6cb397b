#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hgclust/oracle.hpp"
#include "hgclust/sdp.hpp"
#include "hgclust/similarity.hpp"

using namespace hgclust;

namespace {

Matrix random_symmetric(Index n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Dykstra's alternating projections between the box and the affine set
// {Trace = t [, <1, X> = c]}; the affine part is solved by a 2x2 system.
Matrix dykstra(const Matrix& m, double t, std::optional<double> c, int sweeps = 20000) {
  const Index n = static_cast<Index>(m.rows());
  const Matrix I = Matrix::Identity(n, n);
  const Matrix J = Matrix::Ones(n, n);
  auto affine = [&](const Matrix& y) -> Matrix {
    if (!c) return y - ((y.trace() - t) / n) * I;
    // Y - a I - b J with <I, .> = t and <J, .> = c.
    Eigen::Matrix2d g;
    g << n, n, n, static_cast<double>(n) * n;
    const Eigen::Vector2d rhs(y.trace() - t, y.sum() - *c);
    const Eigen::Vector2d ab = g.fullPivLu().solve(rhs);
    return y - ab(0) * I - ab(1) * J;
  };
  auto box = [](const Matrix& y) -> Matrix { return y.cwiseMax(0.0).cwiseMin(1.0); };
  Matrix x = m;
  Matrix p = Matrix::Zero(n, n), q = Matrix::Zero(n, n);
  for (int s = 0; s < sweeps; ++s) {
    const Matrix y = box(x + p);
    p = x + p - y;
    const Matrix x_new = affine(y + q);
    q = y + q - x_new;
    const double change = (x_new - x).norm();
    x = x_new;
    if (change < 1e-13) break;
  }
  return x;
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol_primal = 1e-7;
  cfg.tol_dual = 1e-7;
  cfg.max_iter = 20000;
  return cfg;
}

void check_feasible(const SdpSolution& sol, double trace_target) {
  const Matrix& x = sol.x;
  const double n = static_cast<double>(x.rows());
  CHECK(x == x.transpose());
  CHECK(x.minCoeff() >= -1e-6);
  CHECK(x.maxCoeff() <= 1.0 + 1e-6);
  CHECK(std::abs(x.trace() - trace_target) <= 1e-6 * n);
  CHECK(min_eig(x) >= -1e-6 * n);
}

Matrix constant_law_similarity(std::span<const Index> sizes, int d, double p, double q) {
  const Partition truth = make_partition(sizes);
  const ModelParams prm{.n = truth.n(), .d = d, .k = static_cast<int>(sizes.size()), .p = p, .q = q,
                        .weight_law = WeightLaw::constant, .seed = 0};
  return build_similarity(sample_whsbm(prm, truth));
}

Matrix bernoulli_similarity(std::span<const Index> sizes, int d, double p, double q, std::uint64_t seed) {
  const Partition truth = make_partition(sizes);
  const ModelParams prm{.n = truth.n(), .d = d, .k = static_cast<int>(sizes.size()), .p = p, .q = q,
                        .weight_law = WeightLaw::bernoulli, .seed = seed};
  return build_similarity(sample_whsbm(prm, truth));
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("objective") {
  const Index sizes[] = {3, 3};
  const Matrix a = constant_law_similarity(sizes, 3, 0.8, 0.2);
  CHECK(objective(a, 1.1, Matrix::Zero(6, 6)) == 0.0);
  CHECK(objective(a, 1.1, Matrix::Identity(6, 6)) == doctest::Approx(-6.6));
  // Off-diagonal within pairs: 2 * (9 - 3) * (1.4 - 1.1); diagonal: -6 * 1.1.
  const Matrix xstar = make_partition(sizes).cluster_matrix();
  CHECK(objective(a, 1.1, xstar) == doctest::Approx(2 * 6 * 0.3 - 6 * 1.1));
  CHECK_THROWS_AS(objective(a, 1.0, Matrix::Zero(5, 5)), std::invalid_argument);
}

TEST_CASE("psd projection") {
  const Matrix v = Eigen::Vector3d(1.0, -2.0, 0.5);
  const Matrix psd = v * v.transpose() + Matrix::Identity(3, 3);
  CHECK((project_psd(psd) - psd).cwiseAbs().maxCoeff() <= 1e-12);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK((project_psd(d) - expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(project_psd(-(v * v.transpose())).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("psd projection satisfies the projection optimality conditions") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix m = random_symmetric(7, seed);
    const Matrix p = project_psd(m);
    // P psd, M - P nsd, and <P, M - P> = 0.
    CHECK(min_eig(p) >= -1e-10);
    CHECK(min_eig(-(m - p)) >= -1e-10);
    CHECK(std::abs((p.array() * (m - p).array()).sum()) <= 1e-10);
  }
}

TEST_CASE("affine box projection examples") {
  const PenalizedMode pen{1.0};
  Matrix feasible = Matrix::Identity(4, 4);
  feasible(0, 1) = feasible(1, 0) = 0.3;
  CHECK(project_affine_box(feasible, pen) == feasible);
  CHECK(project_affine_box(Matrix::Constant(4, 4, 2.0), pen) == Matrix::Ones(4, 4));
  CHECK(project_affine_box(Matrix::Zero(4, 4), pen) == Matrix::Identity(4, 4));
  const ConstrainedMode con{4.0, 4.0};
  CHECK((project_affine_box(Matrix::Constant(4, 4, 0.7), con) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK_THROWS_AS(project_affine_box(Matrix::Zero(4, 4), ConstrainedMode{5.0, 5.0}), std::invalid_argument);
}

TEST_CASE("affine box projection agrees with Dykstra's method") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Index n = 5;
    const Matrix m = random_symmetric(n, 100 + seed, 0.8) + Matrix::Constant(n, n, 0.3);
    SUBCASE("penalized") {
      const Matrix exact = project_affine_box(m, PenalizedMode{0.5});
      CHECK((exact - dykstra(m, n, std::nullopt)).cwiseAbs().maxCoeff() <= 1e-7);
    }
    SUBCASE("constrained") {
      const ConstrainedMode mode = balanced_constraints(2, 2);
      const Matrix exact = project_affine_box(m, mode);
      CHECK((exact - dykstra(m, mode.trace_total, mode.ones_total)).cwiseAbs().maxCoeff() <= 1e-7);
      CHECK(exact.trace() == doctest::Approx(4.0).epsilon(1e-12));
      CHECK(exact.sum() == doctest::Approx(8.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("clipped_sum_shift against bisection") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.5, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(9);
    for (double& x : v) x = g(rng);
    const double target = std::uniform_real_distribution<double>(0.0, 9.0)(rng);
    const double beta = clipped_sum_shift(v, target);
    double lo = -10.0, hi = 10.0;
    auto f = [&](double b) {
      double s = 0.0;
      for (double x : v) s += std::clamp(x - b, 0.0, 1.0);
      return s;
    };
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > target ? lo : hi) = mid;
    }
    CHECK(f(beta) == doctest::Approx(target).epsilon(1e-12));
    CHECK(f(beta) == doctest::Approx(f(0.5 * (lo + hi))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(clipped_sum_shift({0.1, 0.2}, 3.0), std::invalid_argument);
}

TEST_CASE("solve: lambda above every similarity returns the identity") {
  const Index sizes[] = {2, 2};
  const Matrix a = constant_law_similarity(sizes, 2, 1.0, 0.3);
  const auto sol = solve({a, PenalizedMode{1.5}});
  CHECK(sol.converged);
  CHECK((sol.x - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-4);
  // Brute force over X(4, k): singletons are the combinatorial optimum.
  const auto best = brute_force_truncated(a, 4, 1.5);
  CHECK(best.partition.labels() == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("solve: n = 4 two blocks") {
  const Index sizes[] = {2, 2};
  const Matrix a = constant_law_similarity(sizes, 2, 1.0, 0.0);
  const auto sol = solve({a, PenalizedMode{0.5}});
  CHECK(sol.converged);
  CHECK((sol.x - make_partition(sizes).cluster_matrix()).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK(sol.integrality_gap() <= 1e-4);
  CHECK(brute_force_truncated(a, 2, 0.5).partition.labels() == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("solve: constrained with ones_total = trace_total = n returns the identity") {
  for (Index n : {3, 6}) {
    const Matrix a = random_symmetric(n, 5).cwiseAbs();
    Matrix sym = 0.5 * (a + a.transpose());
    sym.diagonal().setZero();
    const auto sol = solve({sym, ConstrainedMode{static_cast<double>(n), static_cast<double>(n)}});
    CHECK((sol.x - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("solve rejects invalid problems") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(solve({a, PenalizedMode{0.5}}), std::invalid_argument);
  a(1, 0) = std::nan("");
  CHECK_THROWS_AS(solve({a, PenalizedMode{0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(solve({Matrix::Zero(3, 3), PenalizedMode{-1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(solve({Matrix::Zero(3, 3), ConstrainedMode{3.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(solve({Matrix::Zero(3, 3), ConstrainedMode{3.0, 10.0}}), std::invalid_argument);
  SolverConfig bad;
  bad.rho = 0.0;
  CHECK_THROWS_AS(solve({Matrix::Zero(3, 3), PenalizedMode{0.5}}, bad), std::invalid_argument);
  bad = {};
  bad.max_iter = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("ground-truth cluster matrices are feasible") {
  const Index sizes[] = {3, 4, 2};
  const Matrix x = make_partition(sizes).cluster_matrix();
  CHECK(x.trace() == 9.0);
  CHECK(min_eig(x) >= -1e-12);
  CHECK(((x.array() == 0.0) || (x.array() == 1.0)).all());
  const Index bal[] = {3, 3};
  const Matrix xo = make_partition(bal, 2).cluster_matrix();
  const auto c = balanced_constraints(2, 3);
  CHECK(xo.trace() == c.trace_total);
  CHECK(xo.sum() == c.ones_total);
  CHECK(c.trace_total == 6.0);
  CHECK(c.ones_total == 18.0);
}

TEST_CASE("solutions are feasible, sandwich the truth, and respect tolerances") {
  const Index sizes[] = {4, 4, 4};
  const Partition truth = make_partition(sizes);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Matrix a = bernoulli_similarity(sizes, 3, 0.7, 0.3, seed);
    const double lambda = 0.5 * (within_similarity(12, 3, 4, 0.7, 0.3) + cross_similarity(12, 3, 0.3));
    SolverConfig cfg;
    cfg.record_trace = true;
    const auto sol = solve({a, PenalizedMode{lambda}}, cfg);
    check_feasible(sol, 12.0);
    CHECK(sol.objective >= objective(a, lambda, truth.cluster_matrix()) - 1e-4 * 144);
    CHECK(sol.trace.size() == static_cast<std::size_t>(sol.iterations));
    if (sol.converged) {
      CHECK(sol.primal_residual <= 1e-5 * 12);
      CHECK(sol.dual_residual <= 1e-5 * 12);
    }
  }
}

TEST_CASE("constrained solutions are feasible") {
  const Index sizes[] = {3, 3};
  const Partition truth = make_partition(sizes, 3);
  const ModelParams prm{.n = 9, .d = 3, .k = 2, .p = 0.8, .q = 0.2, .weight_law = WeightLaw::bernoulli, .seed = 4};
  const Matrix a = build_similarity(sample_whpcm(prm, truth));
  const auto mode = balanced_constraints(2, 3);
  const auto sol = solve({a, mode});
  check_feasible(sol, mode.trace_total);
  CHECK(sol.x.sum() == doctest::Approx(mode.ones_total).epsilon(1e-9));
  CHECK(sol.objective >= objective(a, 0.0, truth.cluster_matrix()) - 1e-4 * 81);
}

TEST_CASE("relaxation dominates the discrete program for n <= 8") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Index n = 5 + static_cast<Index>(seed % 4);
    Matrix a = random_symmetric(n, 700 + seed).cwiseAbs();
    a = 0.5 * (a + a.transpose());
    a.diagonal().setZero();
    const double lambda = 0.6;
    const auto sol = solve({a, PenalizedMode{lambda}}, tight());
    for (int k = 1; k <= 3; ++k) {
      CHECK(sol.objective >= brute_force_truncated(a, k, lambda).objective - 1e-6);
    }
  }
}

TEST_CASE("solve is deterministic") {
  const Index sizes[] = {5, 5};
  const Matrix a = bernoulli_similarity(sizes, 3, 0.6, 0.3, 8);
  const auto x = solve({a, PenalizedMode{4.0}});
  const auto y = solve({a, PenalizedMode{4.0}});
  CHECK(x.x == y.x);
  CHECK(x.iterations == y.iterations);
}

}
