#pragma once

// Generators and brute-force oracles shared by the unit suites.

#include <austere/matspace.hpp>

#include <random>

namespace testing_support {

using austere::Matrix;

inline Matrix random_symmetric(int n, austere::Rng& rng) {
  Matrix a = austere::gaussian_matrix(n, n, rng);
  return 0.5 * (a + a.transpose());
}

/// Σ_{r,s} ‖B_r B_s − B_s B_r‖² entry by entry, no Eigen products.
inline double brute_comm_sum(const std::vector<Matrix>& t) {
  double total = 0;
  for (std::size_t r = 0; r < t.size(); ++r)
    for (std::size_t s = 0; s < t.size(); ++s) {
      const Matrix& a = t[r];
      const Matrix& b = t[s];
      const auto n = a.rows();
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          double v = 0;
          for (Eigen::Index k = 0; k < n; ++k) v += a(i, k) * b(k, j) - b(i, k) * a(k, j);
          total += v * v;
        }
    }
  return total;
}

/// Q(p,q) element with the given p x q block.
inline Matrix embed_block(const Matrix& a) {
  const auto p = a.rows(), q = a.cols();
  Matrix out = Matrix::Zero(p + q, p + q);
  out.topRightCorner(p, q) = a;
  out.bottomLeftCorner(q, p) = a.transpose();
  return out;
}

/// Block-diagonal O(p) x O(q) element.
inline Matrix random_block_orthogonal(int p, int q, austere::Rng& rng) {
  Matrix u = Matrix::Zero(p + q, p + q);
  u.topLeftCorner(p, p) = austere::random_orthogonal(p, rng);
  u.bottomRightCorner(q, q) = austere::random_orthogonal(q, rng);
  return u;
}

/// Permutation matrix Π with (Πᵀ X Π)(a,b) = X(img[a], img[b]).
inline Matrix permutation(const std::vector<int>& img) {
  const int n = static_cast<int>(img.size());
  Matrix p = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a) p(img[a], a) = 1;
  return p;
}

/// Sends the C1/C2 support {0,1} | {2,3} to {0,1} | {p, p+1} so that padded
/// canonical tuples land in Q(p,q).
inline Matrix canonical_to_qpq(int p, int q) {
  std::vector<int> img(p + q);
  img[0] = 0;
  img[1] = 1;
  img[p] = 2;
  img[p + 1] = 3;
  int next = 4;
  for (int i = 2; i < p; ++i) img[i] = next++;
  for (int j = p + 2; j < p + q; ++j) img[j] = next++;
  return permutation(img);
}

}  // namespace testing_support
