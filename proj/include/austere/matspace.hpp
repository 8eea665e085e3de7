#pragma once

// Matrix-space algebra for austere subspaces: symmetric matrices, the
// subspace Q(p,q) of block-off-diagonal symmetric matrices with its ordered
// orthonormal basis, Frobenius geometry, commutators, austerity tests and
// the O(n) x O(m) action on matrix tuples.

#include <austere/core.hpp>
#include <austere/lex_order.hpp>

#include <string>
#include <utility>
#include <vector>

namespace austere {

/// A real symmetric matrix. Construction either rejects asymmetric input or
/// symmetrizes it; afterwards entries(i,j) == entries(j,i) bit for bit.
class SymMat {
 public:
  SymMat() = default;

  static SymMat checked(const Matrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) throw InputError("SymMat: matrix is not square");
    if (m.size() > 0 && max_abs(m - m.transpose()) > tol)
      throw InputError("SymMat: matrix is not symmetric within tolerance");
    return SymMat(m);
  }

  static SymMat symmetrized(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("SymMat: matrix is not square");
    return SymMat(m);
  }

  const Matrix& matrix() const { return m_; }
  operator const Matrix&() const { return m_; }
  Eigen::Index n() const { return m_.rows(); }

 private:
  explicit SymMat(const Matrix& m) : m_((m + m.transpose()) * 0.5) {}
  Matrix m_;
};

/// Q(p,q): symmetric (p+q)x(p+q) matrices [[0, a], [aᵀ, 0]] with a ∈ M(p,q).
/// Stores p and q exactly as given.
class QSpace {
 public:
  QSpace(int p, int q) : p_(p), q_(q) {
    if (p < 1 || q < 1) throw InputError("QSpace: p and q must be >= 1");
  }

  int p() const { return p_; }
  int q() const { return q_; }
  int n() const { return p_ + q_; }
  /// Basis cardinality p*q.
  int dim() const { return p_ * q_; }

  /// Basis index of the entry (i, j) with 0 <= i < p <= j < n.
  int index(int i, int j) const {
    if (i < 0 || i >= p_ || j < p_ || j >= n()) throw InputError("QSpace::index: entry outside the off-diagonal block");
    return lex::rect_rank(i, j - p_, q_);
  }

  /// Inverse of index(): the matrix position (i, j) of basis element alpha.
  std::pair<int, int> entry(int alpha) const {
    if (alpha < 0 || alpha >= dim()) throw InputError("QSpace::entry: basis index out of range");
    auto [i, jj] = lex::rect_unrank(alpha, q_);
    return {i, jj + p_};
  }

  /// Ê_α = (E_ij + E_ji)/√2.
  Matrix basis_element(int alpha) const {
    auto [i, j] = entry(alpha);
    Matrix e = Matrix::Zero(n(), n());
    e(i, j) = e(j, i) = kInvSqrt2;
    return e;
  }

  /// E_ij + E_ji in an arbitrary scalar type; exact for integer scalars.
  template <class Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unscaled_basis_element(int alpha) const {
    auto [i, j] = entry(alpha);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> e =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n(), n());
    e(i, j) = e(j, i) = Scalar(1);
    return e;
  }

  /// diag(I_p, -I_q); Q(p,q) is exactly its anticommutant in S_n.
  Matrix grading() const {
    Vector d(n());
    d.head(p_).setOnes();
    d.tail(q_).setConstant(-1.0);
    return d.asDiagonal();
  }

  /// Permutation Π with Πᵀ A Π ∈ Q(q,p) for A ∈ Q(p,q).
  Matrix block_swap() const {
    Matrix s = Matrix::Zero(n(), n());
    for (int k = 0; k < q_; ++k) s(p_ + k, k) = 1.0;
    for (int k = 0; k < p_; ++k) s(k, q_ + k) = 1.0;
    return s;
  }

  QSpace swapped() const { return QSpace(q_, p_); }

  bool operator==(const QSpace&) const = default;

 private:
  int p_;
  int q_;
};

/// Ordered orthonormal basis {Ê_α} of Q(p,q).
inline std::vector<Matrix> qpq_basis(const QSpace& space) {
  std::vector<Matrix> out;
  out.reserve(space.dim());
  for (int a = 0; a < space.dim(); ++a) out.push_back(space.basis_element(a));
  return out;
}

/// An ordered m-tuple of symmetric n x n matrices.
class MatTuple {
 public:
  MatTuple() = default;

  explicit MatTuple(std::vector<Matrix> mats, double sym_tol = 1e-12) {
    if (!mats.empty()) {
      n_ = mats.front().rows();
      for (auto& b : mats) {
        if (b.rows() != n_ || b.cols() != n_) throw InputError("MatTuple: members must share one square size");
        b = SymMat::checked(b, sym_tol).matrix();
      }
    }
    mats_ = std::move(mats);
  }

  static MatTuple zeros(Eigen::Index n, int m) {
    MatTuple t;
    t.n_ = n;
    t.mats_.assign(m, Matrix::Zero(n, n));
    return t;
  }

  Eigen::Index n() const { return n_; }
  int m() const { return static_cast<int>(mats_.size()); }
  const Matrix& operator[](int r) const { return mats_.at(r); }
  const std::vector<Matrix>& mats() const { return mats_; }
  auto begin() const { return mats_.begin(); }
  auto end() const { return mats_.end(); }

  /// Σ_r ‖B_r‖².
  double norm_sq() const {
    double s = 0;
    for (const auto& b : mats_) s += b.squaredNorm();
    return s;
  }

  MatTuple scaled(double c) const {
    MatTuple t = *this;
    for (auto& b : t.mats_) b *= c;
    return t;
  }

  /// Unit total norm Σ‖B_r‖² = 1; the zero tuple is returned unchanged.
  MatTuple normalized() const {
    double s = norm_sq();
    return s > 0 ? scaled(1.0 / std::sqrt(s)) : *this;
  }

 private:
  Eigen::Index n_ = 0;
  std::vector<Matrix> mats_;
};

inline double max_abs_diff(const MatTuple& a, const MatTuple& b) {
  if (a.m() != b.m() || a.n() != b.n()) return INFINITY;
  double e = 0;
  for (int r = 0; r < a.m(); ++r) e = std::max(e, max_abs(a[r] - b[r]));
  return e;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw InputError("commutator: dimension mismatch");
  return a * b - b * a;
}

/// ⟨A,B⟩ = tr(A Bᵀ).
inline double frobenius(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("frobenius: shape mismatch");
  return (a.array() * b.array()).sum();
}

/// Nonzero eigenvalues occur in ± pairs: sorted eigenvalues paired from both
/// ends inward must cancel to within the absolute tolerance.
inline bool is_austere(const Matrix& a, double tol = 1e-9) {
  if (a.rows() != a.cols()) throw InputError("is_austere: matrix is not square");
  if (a.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("is_austere: eigen-solver failed");
  const Vector& ev = es.eigenvalues();  // ascending
  const Eigen::Index n = ev.size();
  for (Eigen::Index k = 0; k <= (n - 1) / 2; ++k)
    if (std::abs(ev(k) + ev(n - 1 - k)) > tol) return false;
  return true;
}

/// Both diagonal blocks vanish (max-abs entry <= tol).
inline bool membership_qpq(const Matrix& a, const QSpace& space, double tol = 1e-12) {
  if (a.rows() != space.n() || a.cols() != space.n()) throw InputError("membership_qpq: dimension mismatch");
  const int p = space.p(), q = space.q();
  return max_abs(a.topLeftCorner(p, p)) <= tol && max_abs(a.bottomRightCorner(q, q)) <= tol &&
         max_abs(a.topRightCorner(p, q) - a.bottomLeftCorner(q, p).transpose()) <= tol;
}

inline bool membership_qpq(const MatTuple& t, const QSpace& space, double tol = 1e-12) {
  if (t.m() > 0 && t.n() != space.n()) throw InputError("membership_qpq: dimension mismatch");
  for (const auto& b : t)
    if (!membership_qpq(b, space, tol)) return false;
  return true;
}

inline void require_qpq(const MatTuple& t, const QSpace& space, double tol, const char* who) {
  if (t.m() > 0 && t.n() != space.n())
    throw InputError(std::string(who) + ": tuple size does not match p+q");
  if (!membership_qpq(t, space, tol))
    throw InputError(std::string(who) + ": member outside Q(p,q)");
}

/// Coefficient matrix B ∈ M(N, m) with (B_1..B_m) = (Ê_1..Ê_N) B.
inline Matrix coefficients(const MatTuple& t, const QSpace& space) {
  Matrix c(space.dim(), t.m());
  for (int r = 0; r < t.m(); ++r)
    for (int a = 0; a < space.dim(); ++a) {
      auto [i, j] = space.entry(a);
      c(a, r) = kSqrt2 * t[r](i, j);
    }
  return c;
}

inline MatTuple from_coefficients(const Matrix& c, const QSpace& space) {
  if (c.rows() != space.dim()) throw InputError("from_coefficients: row count must equal p*q");
  std::vector<Matrix> mats(c.cols(), Matrix::Zero(space.n(), space.n()));
  for (Eigen::Index r = 0; r < c.cols(); ++r)
    for (int a = 0; a < space.dim(); ++a) {
      auto [i, j] = space.entry(a);
      mats[r](i, j) = mats[r](j, i) = kInvSqrt2 * c(a, r);
    }
  return MatTuple(std::move(mats));
}

/// Tuple with i.i.d. standard-Gaussian basis coefficients.
inline MatTuple random_qpq_tuple(const QSpace& space, int m, Rng& rng) {
  return from_coefficients(gaussian_matrix(space.dim(), m, rng), space);
}

/// Element (P, R) of K(n,m) = O(n) x O(m).
class KElement {
 public:
  KElement(Matrix p, Matrix r, double tol = 1e-12) : p_(std::move(p)), r_(std::move(r)) {
    if (p_.rows() != p_.cols() || r_.rows() != r_.cols()) throw InputError("KElement: P and R must be square");
    if (orthogonality_defect(p_) > tol) throw InputError("KElement: P is not orthogonal");
    if (r_.size() > 0 && orthogonality_defect(r_) > tol) throw InputError("KElement: R is not orthogonal");
  }

  static KElement identity(Eigen::Index n, Eigen::Index m) {
    return KElement(Matrix::Identity(n, n), Matrix::Identity(m, m));
  }

  static KElement random(Eigen::Index n, Eigen::Index m, Rng& rng) {
    Matrix p = random_orthogonal(n, rng);
    Matrix r = random_orthogonal(m, rng);
    return KElement(std::move(p), std::move(r));
  }

  const Matrix& P() const { return p_; }
  const Matrix& R() const { return r_; }

  KElement inverse() const { return KElement(p_.transpose(), r_.transpose(), 1e-10); }

  /// The element acting as `then` after `*this`: (P1 P2, R1 R2).
  KElement compose(const KElement& then) const { return KElement(p_ * then.p_, r_ * then.r_, 1e-10); }

 private:
  Matrix p_;
  Matrix r_;
};

/// (P,R)·(B_1..B_m) = (Σ_j R_j1 PᵀB_jP, ..., Σ_j R_jm PᵀB_jP).
inline MatTuple k_action(const KElement& g, const MatTuple& t) {
  if (g.R().rows() != t.m()) throw InputError("k_action: R size does not match tuple length");
  if (t.m() > 0 && g.P().rows() != t.n()) throw InputError("k_action: P size does not match matrix size");
  std::vector<Matrix> conj;
  conj.reserve(t.m());
  for (const auto& b : t) conj.push_back(g.P().transpose() * b * g.P());
  std::vector<Matrix> out(t.m(), Matrix::Zero(t.n(), t.n()));
  for (int k = 0; k < t.m(); ++k)
    for (int j = 0; j < t.m(); ++j)
      if (g.R()(j, k) != 0.0) out[k] += g.R()(j, k) * conj[j];
  return MatTuple(std::move(out), 1e-9);
}

/// m x m Gram matrix ⟨B_r, B_s⟩.
inline Matrix gram(const MatTuple& t) {
  Matrix g(t.m(), t.m());
  for (int r = 0; r < t.m(); ++r)
    for (int s = r; s < t.m(); ++s) g(r, s) = g(s, r) = frobenius(t[r], t[s]);
  return g;
}

/// Relative eigenvalue cutoff for numerical rank. Kept near rounding level:
/// undercounting d turns the (d−1)/(2d) bound into a false violation.
inline constexpr double kRankTol = 1e-12;

/// Rank of a Gram matrix: eigenvalues above tol x (largest eigenvalue).
inline int gram_rank(const Matrix& g, double tol = kRankTol) {
  if (g.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  double top = ev.maxCoeff();
  if (top <= 0) return 0;
  int d = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > tol * top) ++d;
  return d;
}

/// dim Span{B_r}.
inline int span_dim(const MatTuple& t, double tol = kRankTol) { return gram_rank(gram(t), tol); }

/// Σ_{r,s} ‖[B_r, B_s]‖² for a general symmetric tuple.
inline double comm_sum(const MatTuple& t) {
  double s = 0;
  for (int r = 0; r < t.m(); ++r)
    for (int u = r + 1; u < t.m(); ++u) s += commutator(t[r], t[u]).squaredNorm();
  return 2 * s;
}

/// The same sum for Q(p,q) members from their p x q blocks a_r, stacked
/// vertically (rows r*p .. r*p+p-1 hold a_r). [B_r,B_s] is block diagonal
/// with X - Xᵀ and Y - Yᵀ for X = a_r a_sᵀ, Y = a_rᵀ a_s, and
///   ‖X - Xᵀ‖² + ‖Y - Yᵀ‖² = 2⟨a_rᵀa_r, a_sᵀa_s⟩ + 2⟨a_r a_rᵀ, a_s a_sᵀ⟩ - 4 tr(M²),
/// M = a_sᵀ a_r.
inline double comm_sum_stacked(const Matrix& stacked, int m) {
  if (m < 1 || stacked.rows() % m != 0) throw InputError("comm_sum_stacked: row count must be a multiple of m");
  if (m < 2) return 0.0;
  const Eigen::Index p = stacked.rows() / m, q = stacked.cols(), ld = stacked.rows();
  const double* d = stacked.data();
  auto at = [&](int r, Eigen::Index i, Eigen::Index k) { return d[k * ld + r * p + i]; };
  std::vector<double> col_gram(static_cast<std::size_t>(m * q * q)), row_gram(static_cast<std::size_t>(m * p * p));
  for (int r = 0; r < m; ++r) {
    double* g = &col_gram[r * q * q];
    for (Eigen::Index k = 0; k < q; ++k)
      for (Eigen::Index l = 0; l < q; ++l) {
        double v = 0;
        for (Eigen::Index i = 0; i < p; ++i) v += at(r, i, k) * at(r, i, l);
        g[k * q + l] = v;
      }
    double* h = &row_gram[r * p * p];
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) {
        double v = 0;
        for (Eigen::Index k = 0; k < q; ++k) v += at(r, i, k) * at(r, j, k);
        h[i * p + j] = v;
      }
  }
  std::vector<double> mm(static_cast<std::size_t>(q * q));
  double s = 0;
  for (int r = 0; r < m; ++r)
    for (int u = r + 1; u < m; ++u) {
      double gg = 0, hh = 0, tr = 0;
      for (Eigen::Index k = 0; k < q * q; ++k) gg += col_gram[r * q * q + k] * col_gram[u * q * q + k];
      for (Eigen::Index k = 0; k < p * p; ++k) hh += row_gram[r * p * p + k] * row_gram[u * p * p + k];
      for (Eigen::Index k = 0; k < q; ++k)
        for (Eigen::Index l = 0; l < q; ++l) {
          double v = 0;
          for (Eigen::Index i = 0; i < p; ++i) v += at(u, i, k) * at(r, i, l);
          mm[k * q + l] = v;
        }
      for (Eigen::Index k = 0; k < q; ++k)
        for (Eigen::Index l = 0; l < q; ++l) tr += mm[k * q + l] * mm[l * q + k];
      s += 2 * (gg + hh) - 4 * tr;
    }
  return 2 * s;
}

inline double comm_sum_blocks(const std::vector<Matrix>& blocks) {
  const int m = static_cast<int>(blocks.size());
  if (m < 2) return 0.0;
  const Eigen::Index p = blocks.front().rows(), q = blocks.front().cols();
  Matrix stacked(p * m, q);
  for (int r = 0; r < m; ++r) {
    if (blocks[r].rows() != p || blocks[r].cols() != q) throw InputError("comm_sum_blocks: blocks must share one shape");
    stacked.middleRows(r * p, p) = blocks[r];
  }
  return comm_sum_stacked(stacked, m);
}

inline std::vector<Matrix> qpq_blocks(const MatTuple& t, const QSpace& space) {
  std::vector<Matrix> blocks;
  blocks.reserve(t.m());
  for (const auto& b : t) blocks.push_back(b.topRightCorner(space.p(), space.q()));
  return blocks;
}

}  // namespace austere
