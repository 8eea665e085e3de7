#pragma once

// Clifford systems P_0..P_m on R^{2l}, the δ(m) table, the extension
// criterion, and the block-structured focal shape-operator tuples.

#include <austere/ddvv.hpp>
#include <austere/matspace.hpp>

#include <Eigen/Eigenvalues>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace austere {

/// Dimension of the irreducible real representation of the Clifford algebra
/// C_{m-1}: 1,2,4,4,8,8,8,8 for m = 1..8, then δ(m+8) = 16 δ(m).
inline long long delta(int m) {
  if (m <= 0) throw InputError("delta: m must be >= 1");
  static constexpr std::array<long long, 8> base = {1, 2, 4, 4, 8, 8, 8, 8};
  long long f = 1;
  while (m > 8) {
    m -= 8;
    f *= 16;
  }
  return f * base[m - 1];
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace detail {

// Real 2x2 generators: identity, σx, σz (symmetric) and ε (skew, ε² = −I).
inline Matrix pauli2(int k) {
  Matrix m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 1, 0, 0, -1; break;
    default: m << 0, 1, -1, 0; break;
  }
  return m;
}

inline Matrix pauli_string(const std::vector<int>& word) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k : word) out = kron(out, pauli2(k));
  return out;
}

// Two words anticommute iff an odd number of positions hold distinct non-identity letters.
inline bool words_anticommute(const std::vector<int>& a, const std::vector<int>& b) {
  int c = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0 && a[i] != b[i]) ++c;
  return c % 2 == 1;
}

// Depth-first search for `count` mutually anticommuting words of the given
// length with an odd number of ε letters (real skew matrices squaring to −I).
inline bool anticommuting_words(int length, int count, std::vector<std::vector<int>>& chosen) {
  if (static_cast<int>(chosen.size()) == count) return true;
  int total = 1;
  for (int i = 0; i < length; ++i) total *= 4;
  // Words are enumerated in base 4; continue after the last chosen word.
  auto code = [&](const std::vector<int>& w) {
    int c = 0;
    for (int k : w) c = 4 * c + k;
    return c;
  };
  const int start = chosen.empty() ? 0 : code(chosen.back()) + 1;
  for (int c = start; c < total; ++c) {
    std::vector<int> w(length);
    int eps = 0;
    for (int i = length - 1, v = c; i >= 0; --i, v /= 4) {
      w[i] = v % 4;
      if (w[i] == 3) ++eps;
    }
    if (eps % 2 == 0) continue;
    bool ok = true;
    for (const auto& u : chosen) ok = ok && words_anticommute(u, w);
    if (!ok) continue;
    chosen.push_back(w);
    if (anticommuting_words(length, count, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// k mutually anticommuting orthogonal complex structures (J skew, J² = −I)
/// on R^{δ(k+1)}. Entries lie in {−1, 0, 1}.
inline std::vector<Matrix> complex_structures(int k) {
  if (k < 0) throw InputError("complex_structures: k must be >= 0");
  if (k == 0) return {};
  if (k <= 7) {
    const int length = k == 1 ? 1 : (k <= 3 ? 2 : 3);
    std::vector<std::vector<int>> words;
    if (!detail::anticommuting_words(length, k, words))
      throw std::logic_error("complex_structures: word search failed");
    std::vector<Matrix> out;
    for (const auto& w : words) out.push_back(detail::pauli_string(w));
    return out;
  }
  // Eight structures on R^16: σz ⊗ J_j for the seven on R^8, plus ε ⊗ I.
  std::vector<Matrix> eight;
  for (const auto& j : complex_structures(7)) eight.push_back(kron(detail::pauli2(2), j));
  eight.push_back(kron(detail::pauli2(3), Matrix::Identity(8, 8)));
  if (k == 8) return eight;
  // ω = e_1 ... e_8 is symmetric, squares to I and anticommutes with each e_i.
  Matrix omega = Matrix::Identity(16, 16);
  for (const auto& e : eight) omega = omega * e;
  auto rest = complex_structures(k - 8);
  const Eigen::Index dim = rest.front().rows();
  std::vector<Matrix> out;
  for (const auto& e : eight) out.push_back(kron(e, Matrix::Identity(dim, dim)));
  for (const auto& f : rest) out.push_back(kron(omega, f));
  return out;
}

struct SystemCheck {
  double symmetry = 0;
  double involution = 0;
  double anticommutation = 0;

  double worst() const { return std::max({symmetry, involution, anticommutation}); }
  bool ok(double tol) const { return worst() <= tol; }
};

/// Maximal violations of P_i = P_iᵀ, P_i² = I and P_iP_j + P_jP_i = 0.
inline SystemCheck check_system(const std::vector<Matrix>& mats) {
  SystemCheck c;
  if (mats.empty()) return c;
  const Eigen::Index dim = mats.front().rows();
  Matrix id = Matrix::Identity(dim, dim);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const Matrix& p = mats[i];
    if (p.rows() != dim || p.cols() != dim) throw InputError("check_system: members must share one square shape");
    c.symmetry = std::max(c.symmetry, max_abs(p - p.transpose()));
    c.involution = std::max(c.involution, max_abs(p * p - id));
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      c.anticommutation = std::max(c.anticommutation, max_abs(p * mats[j] + mats[j] * p));
  }
  return c;
}

class CliffordSystem {
 public:
  CliffordSystem(std::vector<Matrix> mats, double tol = 1e-12) : mats_(std::move(mats)) {
    if (mats_.empty()) throw InputError("CliffordSystem: at least one member required");
    if (mats_.front().rows() % 2 != 0) throw InputError("CliffordSystem: ambient dimension must be even");
    auto c = check_system(mats_);
    if (!c.ok(tol))
      throw InputError("CliffordSystem: invariants violated by " + std::to_string(c.worst()));
  }

  /// Half-dimension l of R^{2l}.
  int l() const { return static_cast<int>(mats_.front().rows() / 2); }
  /// Index m of the last member P_m.
  int m() const { return static_cast<int>(mats_.size()) - 1; }
  int size() const { return static_cast<int>(mats_.size()); }
  const Matrix& operator[](int i) const { return mats_.at(i); }
  const std::vector<Matrix>& mats() const { return mats_; }

 private:
  std::vector<Matrix> mats_;
};

/// True iff a system P_0..P_m (m+1 members) exists on R^{2l}.
inline bool system_exists(int m, long long l) {
  if (m < 0 || l < 1) return false;
  if (m == 0) return true;
  return l % delta(m) == 0;
}

/// P_0 = σz⊗I_l = diag(I_l, −I_l), P_1 = σx⊗I_l, P_{1+i} = ε⊗J_i with J_i the
/// complex structures on R^{δ(m)} tensored up to R^l.
inline CliffordSystem build_system(int m, int l) {
  if (m < 0) throw InputError("build_system: m must be >= 0");
  if (l < 1) throw InputError("build_system: l must be >= 1");
  if (!system_exists(m, l))
    throw InputError("build_system: infeasible, l = " + std::to_string(l) + " is not a multiple of delta(" +
                     std::to_string(m) + ") = " + std::to_string(delta(m)));
  Matrix id = Matrix::Identity(l, l);
  std::vector<Matrix> mats{kron(detail::pauli2(2), id)};
  if (m >= 1) mats.push_back(kron(detail::pauli2(1), id));
  if (m >= 2) {
    for (const auto& j : complex_structures(m - 1)) {
      const Eigen::Index reps = l / j.rows();
      mats.push_back(kron(detail::pauli2(3), kron(Matrix::Identity(reps, reps), j)));
    }
  }
  return CliffordSystem(std::move(mats), 0.0);
}

/// Whether `members` anticommuting involutions on R^{2l} can be extended by
/// `extra` further ones.
inline bool extendable(int members, long long l, int extra = 1) {
  if (members < 1 || extra < 0 || l < 1) throw InputError("extendable: members >= 1, extra >= 0, l >= 1 required");
  return system_exists(members + extra - 1, l);
}

inline bool extendable(const CliffordSystem& sys, int extra = 1) { return extendable(sys.size(), sys.l(), extra); }

/// Orthogonal U with U P_0 Uᵀ = diag(I_l, −I_l); returns the conjugated system.
inline CliffordSystem to_standard_gauge(const CliffordSystem& sys) {
  const int l = sys.l();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sys[0]);
  const Matrix& v = es.eigenvectors();
  // Eigenvalues come ascending: −1 block first.
  Matrix u(2 * l, 2 * l);
  u.leftCols(l) = v.rightCols(l);
  u.rightCols(l) = v.leftCols(l);
  if (std::abs(es.eigenvalues()(l - 1) + 1) > 1e-9 || std::abs(es.eigenvalues()(l) - 1) > 1e-9)
    throw InputError("to_standard_gauge: P_0 must have eigenvalues ±1 with equal multiplicity");
  std::vector<Matrix> out;
  for (const auto& p : sys.mats()) {
    Matrix c = u.transpose() * p * u;
    out.push_back(0.5 * (c + c.transpose()));
  }
  out[0] = kron(detail::pauli2(2), Matrix::Identity(l, l));
  return CliffordSystem(std::move(out), 1e-9);
}

struct FocalTuple {
  int m1 = 0;
  int m2 = 0;
  /// A_0, ..., A_{m1} on R^{m1 + 2 m2}.
  MatTuple tuple;
};

/// A_0 = diag(I_{m2}, −I_{m2}, 0_{m1}); A_r has the upper-right block a_r of
/// P_r in its off-diagonal block, padded by a trailing zero block.
inline FocalTuple focal_tuple(int m1, int m2, const CliffordSystem& sys) {
  if (m1 < 1 || m2 < 1) throw InputError("focal_tuple: multiplicities must be positive");
  if (sys.l() != m2) throw InputError("focal_tuple: system must live on R^{2 m2}");
  if (sys.size() < m1 + 1) throw InputError("focal_tuple: system needs m1+1 members");
  Matrix gauge = kron(detail::pauli2(2), Matrix::Identity(m2, m2));
  if (max_abs(sys[0] - gauge) > 1e-12)
    throw InputError("focal_tuple: P_0 must equal diag(I, -I); conjugate with to_standard_gauge first");
  const int n = m1 + 2 * m2;
  std::vector<Matrix> mats;
  for (int r = 0; r <= m1; ++r) {
    Matrix a = Matrix::Zero(n, n);
    if (r == 0) {
      a.topLeftCorner(2 * m2, 2 * m2) = gauge;
    } else {
      Matrix block = sys[r].topRightCorner(m2, m2);
      a.block(0, m2, m2, m2) = block;
      a.block(m2, 0, m2, m2) = block.transpose();
    }
    mats.push_back(std::move(a));
  }
  return FocalTuple{m1, m2, MatTuple(std::move(mats))};
}

/// Focal tuple from the standard system P_0..P_{m1} on R^{2 m2}.
inline FocalTuple focal_tuple(int m1, int m2) { return focal_tuple(m1, m2, build_system(m1, m2)); }

/// The anticommuting involution P = diag(P_{m1+1}, −I_{m1}) obtained from a
/// one-step extension of the standard system; nullopt when none exists.
inline std::optional<Matrix> focal_extension_involution(int m1, int m2) {
  if (!extendable(m1 + 1, m2)) return std::nullopt;
  CliffordSystem ext = build_system(m1 + 1, m2);
  const int n = m1 + 2 * m2;
  Matrix p = Matrix::Zero(n, n);
  p.topLeftCorner(2 * m2, 2 * m2) = ext[m1 + 1];
  p.bottomRightCorner(m1, m1) = -Matrix::Identity(m1, m1);
  return p;
}

inline void require_involution(const Matrix& p, double tol, const char* who) {
  const Eigen::Index n = p.rows();
  if (p.cols() != n) throw InputError(std::string(who) + ": P must be square");
  Matrix id = Matrix::Identity(n, n);
  if (max_abs(p - p.transpose()) > tol || max_abs(p * p - id) > tol)
    throw InputError(std::string(who) + ": P is not a symmetric orthogonal involution");
  if (max_abs(p - id) <= tol || max_abs(p + id) <= tol) throw InputError(std::string(who) + ": P must differ from ±I");
}

/// True iff P A_r + A_r P = 0 for every member.
inline bool involution_type_check(const MatTuple& t, const Matrix& p, double tol = 1e-10) {
  require_involution(p, tol, "involution_type_check");
  if (p.rows() != t.n()) throw InputError("involution_type_check: size mismatch");
  for (const auto& a : t)
    if (max_abs(p * a + a * p) > tol) return false;
  return true;
}

/// (p, q) = multiplicities of the eigenvalues +1 and −1.
inline std::pair<int, int> involution_splitting(const Matrix& p) {
  const int n = static_cast<int>(p.rows());
  const int plus = static_cast<int>(std::lround((p.trace() + n) / 2));
  return {plus, n - plus};
}

/// Conjugates t by the eigenframe U of P (+1 eigenvectors first) so that
/// every member lands in Q(p,q).
inline std::pair<QSpace, MatTuple> to_qpq_frame(const MatTuple& t, const Matrix& p, double tol = 1e-10) {
  if (!involution_type_check(t, p, tol)) throw InputError("to_qpq_frame: P does not anticommute with the tuple");
  auto [plus, minus] = involution_splitting(p);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.transpose()));
  const Matrix& v = es.eigenvectors();
  Matrix u(p.rows(), p.cols());
  u.leftCols(plus) = v.rightCols(plus);
  u.rightCols(minus) = v.leftCols(minus);
  std::vector<Matrix> out;
  for (const auto& a : t) out.push_back(u.transpose() * a * u);
  return {QSpace(plus, minus), MatTuple(std::move(out), 1e-9)};
}

}  // namespace austere
