#include "hgclust/combinatorics.hpp"

#include <stdexcept>

namespace hgclust {

double binomial(long long a, long long b) {
  if (b < 0 || a < b) return 0.0;
  if (b > a - b) b = a - b;
  double result = 1.0;
  for (long long i = 1; i <= b; ++i) {
    result *= static_cast<double>(a - b + i);
    result /= static_cast<double>(i);
  }
  return result;
}

std::uint64_t binomial_exact(long long a, long long b) {
  if (b < 0 || a < b) return 0;
  if (b > a - b) b = a - b;
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  std::uint64_t result = 1;
  for (long long i = 1; i <= b; ++i) {
    // result * (a - b + i) / i stays integral at every step.
    const auto num = static_cast<std::uint64_t>(a - b + i);
    const auto den = static_cast<std::uint64_t>(i);
    if (result > kLimit / num) throw std::overflow_error("binomial coefficient too large");
    result = result * num / den;
  }
  return result;
}

std::uint64_t colex_rank(std::span<const Index> tuple) {
  std::uint64_t rank = 0;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    rank += binomial_exact(tuple[j], static_cast<long long>(j) + 1);
  }
  return rank;
}

std::vector<Index> colex_unrank(std::uint64_t rank, int d) {
  std::vector<Index> tuple(static_cast<std::size_t>(d));
  for (int j = d; j >= 1; --j) {
    // Largest c with C(c, j) <= rank.
    Index c = j - 1;
    while (binomial_exact(c + 1, j) <= rank) ++c;
    tuple[j - 1] = c;
    rank -= binomial_exact(c, j);
  }
  return tuple;
}

bool next_colex(std::vector<Index>& tuple, Index n) {
  const auto d = tuple.size();
  for (std::size_t j = 0; j < d; ++j) {
    const Index limit = (j + 1 < d) ? tuple[j + 1] : n;
    if (tuple[j] + 1 < limit) {
      ++tuple[j];
      for (std::size_t i = 0; i < j; ++i) tuple[i] = static_cast<Index>(i);
      return true;
    }
  }
  return false;
}

}  // namespace hgclust
