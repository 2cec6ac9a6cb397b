#pragma once

#include <cstdint>
#include <vector>

#include "hgclust/model.hpp"

namespace hgclust {

/// Data-driven parameter estimates for the balanced model.
struct TuneEstimate {
  int k_hat = 0;
  double s_hat = 0.0;
  double p_minus_hat = 0.0;
  double q_plus_hat = 0.0;
  double lambda_hat = 0.0;
  std::vector<double> eigenvalues;  // non-increasing
};

/// Eigenvalues of a symmetric matrix, sorted non-increasing.
std::vector<double> sorted_eigenvalues(const Matrix& a);

/// Spectral-gap estimator: k_hat maximizes lambda_i - lambda_{i+1} over
/// i in {2, ..., n-1} (exact ties broken uniformly at random from `seed`);
/// s_hat = n / k_hat; p^-, q^+ and lambda from the two leading eigenvalues.
TuneEstimate estimate(const Matrix& a, std::uint64_t seed = 0);

/// Closed-form spectrum of E[A] for k equal communities of size s, in the
/// order lambda_1, lambda_2..k, lambda_{k+1}..n.
std::vector<double> expected_spectrum(Index n, int k, Index s, double p_minus, double q_plus);

}  // namespace hgclust
