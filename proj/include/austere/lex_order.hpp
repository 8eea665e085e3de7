#pragma once

// The single lexicographic rule used everywhere an index pair is flattened:
// (i,j) < (k,l) iff i < k, or i == k and j < l. Both the Q(p,q) basis order
// and the row/column order of the compound map use it.

#include <cassert>
#include <utility>

namespace austere::lex {

/// Rank of (i, j) in the row-major product [0,rows) x [0,cols).
constexpr int rect_rank(int i, int j, int cols) { return i * cols + j; }

constexpr std::pair<int, int> rect_unrank(int rank, int cols) { return {rank / cols, rank % cols}; }

/// Number of strictly increasing pairs i < j drawn from [0, k).
constexpr int pair_count(int k) { return k < 2 ? 0 : k * (k - 1) / 2; }

/// Rank of (i, j), i < j < k, among strictly increasing pairs.
constexpr int pair_rank(int i, int j, int k) {
  // pairs starting with 0..i-1 come first: sum_{a<i} (k-1-a)
  return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

inline std::pair<int, int> pair_unrank(int rank, int k) {
  int i = 0;
  while (rank >= k - 1 - i) {
    rank -= k - 1 - i;
    ++i;
  }
  assert(i < k - 1);
  return {i, i + 1 + rank};
}

/// Calls f(rank, i, j) for every i < j < k in lexicographic order.
template <class F>
void for_each_pair(int k, F&& f) {
  int rank = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) f(rank++, i, j);
}

}  // namespace austere::lex
