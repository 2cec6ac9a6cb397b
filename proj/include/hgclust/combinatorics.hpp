#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hgclust {

using Index = std::int32_t;

/// Binomial coefficient as a real number. Zero whenever a < b or b < 0.
double binomial(long long a, long long b);

/// Exact binomial coefficient; throws std::overflow_error past 2^62.
std::uint64_t binomial_exact(long long a, long long b);

/// Colexicographic rank of a strictly increasing 0-based tuple.
std::uint64_t colex_rank(std::span<const Index> tuple);

/// Inverse of colex_rank for tuples of size d.
std::vector<Index> colex_unrank(std::uint64_t rank, int d);

/// Advances `tuple` to the next d-subset of [0, n) in colex order.
/// Returns false once the last subset has been passed.
bool next_colex(std::vector<Index>& tuple, Index n);

/// Calls fn(tuple, rank) for every d-subset of [0, n) in colex order.
template <class Fn>
void for_each_subset(Index n, int d, Fn&& fn) {
  if (d < 0 || d > n) return;
  std::vector<Index> tuple(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) tuple[j] = j;
  std::uint64_t rank = 0;
  do {
    fn(std::span<const Index>(tuple), rank);
    ++rank;
  } while (next_colex(tuple, n));
}

}  // namespace hgclust
