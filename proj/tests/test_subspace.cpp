#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hgclust/subspace.hpp"

using namespace hgclust;

namespace {

SubspaceConfig config(std::vector<Index> sizes, double sigma, std::uint64_t seed) {
  SubspaceConfig cfg;
  cfg.k = static_cast<int>(sizes.size());
  cfg.sizes = std::move(sizes);
  cfg.sigma = sigma;
  cfg.seed = seed;
  return cfg;
}

std::vector<std::vector<Eigen::Vector3d>> by_line(const PointCloud& cloud) {
  std::vector<std::vector<Eigen::Vector3d>> lines(static_cast<std::size_t>(cloud.truth.k()));
  for (Index i = 0; i < cloud.truth.n(); ++i) lines[cloud.truth.label(i) - 1].push_back(cloud.points[i]);
  return lines;
}

}  // namespace

TEST_SUITE("subspace") {

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config({3, 0}, 0.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config({3, 3}, -0.1, 0).validate(), std::invalid_argument);
  auto cfg = config({3, 3}, 0.0, 0);
  cfg.k = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("noise-free points are collinear with the origin") {
  const auto cloud = generate_lines(config({10, 10, 10}, 0.0, 4));
  CHECK(cloud.points.size() == 30);
  for (const auto& line : by_line(cloud)) {
    const Eigen::Vector3d dir = line.front().normalized();
    for (const auto& p : line) CHECK(p.cross(dir).norm() <= 1e-12);
  }
}

TEST_CASE("one point per line") {
  const auto cloud = generate_lines(config({1, 1, 1}, 0.0, 0));
  CHECK(cloud.truth.labels() == std::vector<int>{1, 2, 3});
}

TEST_CASE("noisy lines fit within three sigma") {
  const double sigma = 0.01;
  const auto cloud = generate_lines(config({20, 20, 20}, sigma, 6));
  for (const auto& line : by_line(cloud)) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(line.size()), 3);
    for (std::size_t i = 0; i < line.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = line[i].transpose();
    const Eigen::RowVector3d mean = m.colwise().mean();
    m.rowwise() -= mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const Eigen::Vector3d dir = svd.matrixV().col(0);
    double sq = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Eigen::Vector3d r = m.row(i).transpose();
      sq += (r - r.dot(dir) * dir).squaredNorm();
    }
    CHECK(std::sqrt(sq / static_cast<double>(m.rows())) <= 3.0 * sigma);
  }
}

TEST_CASE("triple fitness and weights") {
  const Eigen::Vector3d a(0, 0, 0), b(1, 1, 1), c(2, 2, 2);
  CHECK(triple_fitness(a, b, c) <= 1e-12);
  PointCloud cloud{{a, b, c}, Partition({1, 1, 1}, 1)};
  const auto w = triple_weights(cloud, 0.1);
  REQUIRE(w.edge_count() == 1);
  CHECK(w.weight(0) == 1.0);

  double previous = 1.0;
  for (int step = 1; step <= 10; ++step) {
    const Eigen::Vector3d moved = b + 0.01 * step * Eigen::Vector3d(1, -1, 0).normalized();
    PointCloud off{{a, moved, c}, Partition({1, 1, 1}, 1)};
    const double weight = triple_weights(off, 0.1).weight(0);
    CHECK(weight < previous);
    CHECK(weight > 0.0);
    previous = weight;
  }
  CHECK_THROWS_AS(triple_weights(cloud, 0.0), std::invalid_argument);
}

TEST_CASE("clean cloud: within-line triples weigh 1, a cross-line triple is small") {
  const auto cloud = generate_lines(config({6, 6, 6}, 0.0, 10));
  const auto w = triple_weights(cloud, 0.1);
  CHECK(w.edge_count() == 816);
  for (std::size_t e = 0; e < w.edge_count(); ++e) {
    const double x = w.weight(e);
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
    if (cloud.truth.is_homogeneous(w.nodes(e))) CHECK(x == 1.0);
  }
  // The point of largest norm on each line.
  std::vector<Index> far(3, -1);
  for (Index i = 0; i < 18; ++i) {
    const int l = cloud.truth.label(i) - 1;
    if (far[l] < 0 || cloud.points[i].norm() > cloud.points[far[l]].norm()) far[l] = i;
  }
  const Index t[] = {far[0], far[1], far[2]};
  CHECK(w.weight_of_rank(colex_rank(t)) < 0.5);
}

TEST_CASE("weights are invariant under rotation and translation") {
  auto cloud = generate_lines(config({5, 5, 5}, 0.05, 12));
  const auto base = triple_weights(cloud, 0.2);
  const Eigen::Matrix3d rot =
      (Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized())).toRotationMatrix();
  const Eigen::Vector3d shift(0.3, -2.0, 5.0);
  for (auto& p : cloud.points) p = rot * p + shift;
  const auto moved = triple_weights(cloud, 0.2);
  REQUIRE(moved.edge_count() == base.edge_count());
  double worst = 0.0;
  for (std::size_t e = 0; e < base.edge_count(); ++e) worst = std::max(worst, std::abs(moved.weight(e) - base.weight(e)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("parallel triple computation matches serial") {
  const auto cloud = generate_lines(config({7, 7, 7}, 0.02, 1));
  CHECK(triple_residuals(cloud, 1) == triple_residuals(cloud, 3));
  CHECK(triple_weights(cloud, 0.1, 1) == triple_weights(cloud, 0.1, 4));
  CHECK(default_bandwidth(cloud, 1) == default_bandwidth(cloud, 2));
  CHECK(default_bandwidth(cloud) > 0.0);
}

TEST_CASE("quartile lambda") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  a(0, 2) = a(2, 0) = 2.0;
  a(1, 2) = a(2, 1) = 3.0;
  const double lambda = quartile_lambda(a);
  CHECK(lambda >= 1.0);
  CHECK(lambda <= 3.0);
  CHECK(quartile_lambda(Matrix::Constant(4, 4, 0.5) - 0.5 * Matrix::Identity(4, 4)) == doctest::Approx(0.5));
}

TEST_CASE("noise-free balanced recovery") {
  for (Index s : {4, 6, 8}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto res = subspace_cluster(config({s, s, s}, 0.0, seed));
      CHECK(res.balanced);
      CHECK(res.err == 0.0);
    }
  }
}

TEST_CASE("single line") {
  const auto res = subspace_cluster(config({9}, 0.01, 3));
  CHECK(res.err == 0.0);
}

TEST_CASE("point cloud CSV") {
  const auto cloud = generate_lines(config({1, 2}, 0.0, 0));
  std::ostringstream out;
  write_point_cloud_csv(out, cloud);
  const std::string csv = out.str();
  CHECK(csv.rfind("x,y,z,label\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

}
