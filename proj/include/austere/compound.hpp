#pragma once

// Second compound ("2x2 minors") map and commutator Gram matrices. These
// turn Σ‖[B_r,B_s]‖² into a quadratic form in the spectrum of BBᵀ.

#include <austere/lex_order.hpp>
#include <austere/matspace.hpp>

#include <map>
#include <memory>
#include <mutex>

namespace austere {

/// φ(A)_{(i,j),(k,l)} = a_ik a_jl − a_il a_jk for i<j (rows), k<l (columns),
/// both pair sets in lexicographic order. φ(AB) = φ(A)φ(B), φ(I) = I.
inline Matrix phi(const Matrix& a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (m < 2 || n < 2) throw InputError("phi: both dimensions must be >= 2");
  Matrix out(lex::pair_count(m), lex::pair_count(n));
  lex::for_each_pair(m, [&](int row, int i, int j) {
    lex::for_each_pair(n, [&](int col, int k, int l) {
      out(row, col) = a(i, k) * a(j, l) - a(i, l) * a(j, k);
    });
  });
  return out;
}

/// Gram matrix of the commutators [X_a, X_b], a < b, in lexicographic pair
/// order. Positive semidefinite; 2·trace = Σ_{a,b} ‖[X_a, X_b]‖².
struct CommGram {
  int family_size = 0;
  Matrix entries;

  double trace() const { return entries.trace(); }
};

inline CommGram comm_gram(const std::vector<Matrix>& family) {
  const int k = static_cast<int>(family.size());
  if (k < 2) throw InputError("comm_gram: family needs at least two members");
  std::vector<Matrix> comms(lex::pair_count(k));
  lex::for_each_pair(k, [&](int rank, int a, int b) { comms[rank] = commutator(family[a], family[b]); });
  CommGram g{k, Matrix(comms.size(), comms.size())};
  for (std::size_t u = 0; u < comms.size(); ++u)
    for (std::size_t v = u; v < comms.size(); ++v)
      g.entries(u, v) = g.entries(v, u) = frobenius(comms[u], comms[v]);
  return g;
}

inline CommGram comm_gram(const MatTuple& t) { return comm_gram(t.mats()); }

/// C(E) for the standard basis of Q(p,q), computed once per (p,q) and shared
/// read-only afterwards.
inline std::shared_ptr<const CommGram> basis_comm_gram(const QSpace& space) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const CommGram>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(space.p(), space.q());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (space.dim() < 2) throw InputError("basis_comm_gram: Q(p,q) must have dimension >= 2");
  auto g = std::make_shared<const CommGram>(comm_gram(qpq_basis(space)));
  cache.emplace(key, g);
  return g;
}

/// Q̂_α = Σ_β q_βα Ê_β for an orthogonal N x N matrix Q.
inline std::vector<Matrix> rotated_basis(const Matrix& q, const QSpace& space) {
  if (q.rows() != space.dim() || q.cols() != space.dim()) throw InputError("rotated_basis: Q must be N x N");
  std::vector<Matrix> out;
  out.reserve(space.dim());
  for (int a = 0; a < space.dim(); ++a) out.push_back(from_coefficients(q.col(a), space)[0]);
  return out;
}

/// K_αβ = ‖[Q̂_α, Q̂_β]‖².
inline Matrix pair_comm_norms(const std::vector<Matrix>& family) {
  const std::size_t k = family.size();
  Matrix out = Matrix::Zero(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) out(a, b) = out(b, a) = commutator(family[a], family[b]).squaredNorm();
  return out;
}

/// Σ_{α,β} x_α x_β ‖[Q̂_α, Q̂_β]‖²; equals Σ_{r,s}‖[B_r,B_s]‖² whenever
/// BBᵀ = Q diag(x) Qᵀ.
inline double transformed_lhs(const Vector& x, const Matrix& q, const QSpace& space) {
  if (x.size() != space.dim()) throw InputError("transformed_lhs: x must have length p*q");
  if ((x.array() < 0).any()) throw InputError("transformed_lhs: x must be nonnegative");
  if (orthogonality_defect(q) > 1e-10) throw InputError("transformed_lhs: Q is not orthogonal");
  Matrix k = pair_comm_norms(rotated_basis(q, space));
  return x.dot(k * x);
}

}  // namespace austere
