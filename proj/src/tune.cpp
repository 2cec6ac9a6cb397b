#include "hgclust/tune.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "hgclust/sdp.hpp"

namespace hgclust {

std::vector<double> sorted_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(vals.begin(), vals.end(), std::greater<>());
  return vals;
}

TuneEstimate estimate(const Matrix& a, std::uint64_t seed) {
  const Index n = static_cast<Index>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("estimate: matrix must be square");
  if (n < 4) throw std::invalid_argument("estimate: need n >= 4");

  TuneEstimate est;
  est.eigenvalues = sorted_eigenvalues(a);
  const auto& lam = est.eigenvalues;

  // 1-based i in {2..n-1} maps to gap lam[i-1] - lam[i].
  double best_gap = -std::numeric_limits<double>::infinity();
  for (Index i = 2; i <= n - 1; ++i) best_gap = std::max(best_gap, lam[i - 1] - lam[i]);
  std::vector<int> ties;
  for (Index i = 2; i <= n - 1; ++i) {
    if (lam[i - 1] - lam[i] == best_gap) ties.push_back(i);
  }
  if (ties.size() == 1) {
    est.k_hat = ties.front();
  } else {
    std::mt19937_64 rng(seed);
    est.k_hat = ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
  }

  const double nn = static_cast<double>(n);
  est.s_hat = nn / est.k_hat;
  est.p_minus_hat = (est.s_hat * lam[0] + (nn - est.s_hat) * lam[1]) / (nn * (est.s_hat - 1.0));
  est.q_plus_hat = (lam[0] - lam[1]) / nn;
  est.lambda_hat = 0.5 * (est.p_minus_hat + est.q_plus_hat);
  return est;
}

std::vector<double> expected_spectrum(Index n, int k, Index s, double p_minus, double q_plus) {
  if (k < 1 || s < 1 || static_cast<long long>(k) * s != n) {
    throw std::invalid_argument("expected_spectrum: need n = k * s");
  }
  const double gap = p_minus - q_plus;
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n));
  vals.push_back((s - 1) * gap + (n - 1) * q_plus);
  for (int i = 2; i <= k; ++i) vals.push_back((s - 1) * gap - q_plus);
  for (Index i = k + 1; i <= n; ++i) vals.push_back(-p_minus);
  return vals;
}

}  // namespace hgclust
