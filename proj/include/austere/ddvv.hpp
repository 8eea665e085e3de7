#pragma once

// DDVV-type inequality evaluators and equality certificates.
//
//   classic : Σ‖[B_r,B_s]‖² <= (Σ‖B_r‖²)²              any symmetric tuple
//   qpq     : Σ‖[B_r,B_s]‖² <= ½ (Σ‖B_r‖²)²            members in Q(p,q)
//   qn11    : Σ‖[B_r,B_s]‖² <= (d−1)/(2d) (Σ‖B_r‖²)²   members in Q(n−1,1)
//   bw_pair : ‖[B_1,B_2]‖²  <= ‖B_1‖² ‖B_2‖²            pair in Q(p,q)
//
// Equality in qpq is attained exactly on the K(n,m)-orbits of
// (λ diag(C1,0), λ diag(C2,0), 0, ...), and in qn11 on those of
// (λ D_1, ..., λ D_d, 0, ...) with D_r = E_rn + E_nr.

#include <austere/matspace.hpp>

#include <optional>
#include <string>

namespace austere {

enum class Variant { classic, qpq, qn11, bw_pair };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::classic: return "classic";
    case Variant::qpq: return "qpq";
    case Variant::qn11: return "qn11";
    case Variant::bw_pair: return "bw";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "classic") return Variant::classic;
  if (s == "qpq") return Variant::qpq;
  if (s == "qn11") return Variant::qn11;
  if (s == "bw" || s == "bw_pair") return Variant::bw_pair;
  throw InputError("unknown variant '" + s + "' (expected classic|qpq|qn11|bw)");
}

struct Margin {
  Variant variant = Variant::classic;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  /// Σ‖B_r‖² of the evaluated tuple.
  double scale = 0;
  /// dim Span{B_r}; only set for qn11.
  int d = -1;

  /// Margin of the unit-norm rescaled input (margin is quartic in scale).
  double normalized() const { return scale > 0 ? margin / (scale * scale) : 0.0; }
};

/// C1 and C2: the 4x4 pair realizing equality in the Q(p,q) bound.
inline Matrix c1_matrix() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 2) = c(2, 0) = 1;
  c(1, 3) = c(3, 1) = 1;
  return c;
}

inline Matrix c2_matrix() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 3) = c(3, 0) = -1;
  c(1, 2) = c(2, 1) = 1;
  return c;
}

/// diag(C, 0) in S_n.
inline Matrix pad(const Matrix& c, Eigen::Index n) {
  Matrix out = Matrix::Zero(n, n);
  out.topLeftCorner(c.rows(), c.cols()) = c;
  return out;
}

/// D_r = E_rn + E_nr (1-based r).
inline Matrix d_matrix(Eigen::Index n, int r) {
  if (r < 1 || r >= n) throw InputError("d_matrix: index must lie in [1, n-1]");
  Matrix out = Matrix::Zero(n, n);
  out(r - 1, n - 1) = out(n - 1, r - 1) = 1;
  return out;
}

/// (λ diag(C1,0), λ diag(C2,0), 0, ..., 0).
inline MatTuple canonical_qpq_tuple(Eigen::Index n, int m, double lambda) {
  if (lambda == 0) return MatTuple::zeros(n, m);
  if (n < 4 || m < 2) throw InputError("canonical_qpq_tuple: needs n >= 4 and m >= 2");
  std::vector<Matrix> mats(m, Matrix::Zero(n, n));
  mats[0] = lambda * pad(c1_matrix(), n);
  mats[1] = lambda * pad(c2_matrix(), n);
  return MatTuple(std::move(mats));
}

/// (λ D_1, ..., λ D_d, 0, ..., 0).
inline MatTuple canonical_qn11_tuple(Eigen::Index n, int m, int d, double lambda) {
  if (d > m || d >= n) throw InputError("canonical_qn11_tuple: needs d <= m and d < n");
  std::vector<Matrix> mats(m, Matrix::Zero(n, n));
  for (int r = 1; r <= d; ++r) mats[r - 1] = lambda * d_matrix(n, r);
  return MatTuple(std::move(mats));
}

/// Margin of a Q(p,q) tuple given by its p x q blocks stacked vertically
/// (see comm_sum_stacked); qpq or qn11.
inline Margin ddvv_margin_stacked(const Matrix& stacked, int m, Variant variant) {
  Margin out;
  out.variant = variant;
  out.lhs = comm_sum_stacked(stacked, m);
  out.scale = 2 * stacked.squaredNorm();
  const double s2 = out.scale * out.scale;
  switch (variant) {
    case Variant::qpq:
      out.rhs = 0.5 * s2;
      break;
    case Variant::qn11: {
      const Eigen::Index p = stacked.rows() / m;
      Matrix g(m, m);
      for (int r = 0; r < m; ++r)
        for (int u = r; u < m; ++u)
          g(r, u) = g(u, r) = 2 * (stacked.middleRows(r * p, p).array() * stacked.middleRows(u * p, p).array()).sum();
      out.d = gram_rank(g);
      out.rhs = out.d == 0 ? 0.0 : (out.d - 1.0) / (2.0 * out.d) * s2;
      break;
    }
    default:
      throw InputError("ddvv_margin_stacked: only qpq and qn11 are block variants");
  }
  out.margin = out.rhs - out.lhs;
  return out;
}

inline Margin ddvv_margin_blocks(const std::vector<Matrix>& blocks, Variant variant) {
  if (blocks.empty()) throw InputError("ddvv_margin_blocks: empty tuple");
  const int m = static_cast<int>(blocks.size());
  const Eigen::Index p = blocks.front().rows(), q = blocks.front().cols();
  Matrix stacked(p * m, q);
  for (int r = 0; r < m; ++r) {
    if (blocks[r].rows() != p || blocks[r].cols() != q) throw InputError("ddvv_margin_blocks: blocks must share one shape");
    stacked.middleRows(r * p, p) = blocks[r];
  }
  return ddvv_margin_stacked(stacked, m, variant);
}

inline Margin bw_pair_margin(const Matrix& b1, const Matrix& b2, const QSpace& space, double member_tol = 1e-10) {
  if (!membership_qpq(b1, space, member_tol) || !membership_qpq(b2, space, member_tol))
    throw InputError("bw_pair_margin: member outside Q(p,q)");
  Margin out;
  out.variant = Variant::bw_pair;
  out.lhs = commutator(b1, b2).squaredNorm();
  out.rhs = b1.squaredNorm() * b2.squaredNorm();
  out.scale = b1.squaredNorm() + b2.squaredNorm();
  out.margin = out.rhs - out.lhs;
  return out;
}

/// Evaluates one inequality. qpq/bw need `space`; qn11 uses Q(n−1,1) and
/// requires n >= 3; bw requires a pair.
inline Margin ddvv_margin(const MatTuple& t, Variant variant, const std::optional<QSpace>& space = std::nullopt,
                          double member_tol = 1e-10) {
  switch (variant) {
    case Variant::classic: {
      Margin out;
      out.variant = variant;
      out.lhs = comm_sum(t);
      out.scale = t.norm_sq();
      out.rhs = out.scale * out.scale;
      out.margin = out.rhs - out.lhs;
      return out;
    }
    case Variant::qpq: {
      if (!space) throw InputError("ddvv_margin: variant qpq needs (p,q)");
      require_qpq(t, *space, member_tol, "ddvv_margin");
      return ddvv_margin_blocks(qpq_blocks(t, *space), variant);
    }
    case Variant::qn11: {
      if (t.n() < 3) throw InputError("ddvv_margin: variant qn11 needs n >= 3");
      QSpace s(static_cast<int>(t.n()) - 1, 1);
      if (space && !(*space == s)) throw InputError("ddvv_margin: variant qn11 needs (p,q) = (n-1,1)");
      require_qpq(t, s, member_tol, "ddvv_margin");
      return ddvv_margin_blocks(qpq_blocks(t, s), variant);
    }
    case Variant::bw_pair: {
      if (!space) throw InputError("ddvv_margin: variant bw needs (p,q)");
      if (t.m() != 2) throw InputError("ddvv_margin: variant bw needs exactly two matrices");
      return bw_pair_margin(t[0], t[1], *space, member_tol);
    }
  }
  throw InputError("ddvv_margin: unknown variant");
}

/// Rotation of a Q(n−1,1) tuple to pairwise orthogonal members, exposing
/// the identity Σ‖[B_r,B_s]‖² = 2[(Σ‖b_r‖²)² − Σ‖b_r‖⁴] on the column
/// vectors b_r.
struct Qn11Decomposition {
  /// (n−1) x m; column r is b_r after rotation.
  Matrix vectors;
  /// m x m rotation applied to the tuple.
  Matrix rotation;
  double lhs = 0;
  double identity_rhs = 0;
  double residual = 0;
};

inline Qn11Decomposition qn11_decomposition(const MatTuple& t, double member_tol = 1e-10) {
  if (t.n() < 2) throw InputError("qn11_decomposition: needs n >= 2");
  const int n = static_cast<int>(t.n());
  QSpace s(n - 1, 1);
  require_qpq(t, s, member_tol, "qn11_decomposition");
  Matrix b(n - 1, t.m());
  for (int r = 0; r < t.m(); ++r) b.col(r) = t[r].col(n - 1).head(n - 1);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
  Qn11Decomposition out;
  out.rotation = svd.matrixV();
  out.vectors = b * out.rotation;
  out.lhs = comm_sum_blocks(qpq_blocks(t, s));
  double total = 0, quartic = 0;
  for (Eigen::Index r = 0; r < out.vectors.cols(); ++r) {
    double v = out.vectors.col(r).squaredNorm();
    total += v;
    quartic += v * v;
  }
  out.identity_rhs = 2 * (total * total - quartic);
  out.residual = std::abs(out.lhs - out.identity_rhs);
  return out;
}

struct EqualityCertificate {
  Variant variant;
  /// g · canonical() reproduces the input tuple.
  KElement g;
  double lambda = 0;
  /// Number of nonzero canonical members (2 for qpq unless λ = 0).
  int d = 0;
  /// max-abs entry error of g · canonical() against the unit-normalized input.
  double reconstruction_error = 0;

  MatTuple canonical() const {
    const auto n = g.P().rows();
    const int m = static_cast<int>(g.R().rows());
    return variant == Variant::qpq ? canonical_qpq_tuple(n, m, lambda) : canonical_qn11_tuple(n, m, d, lambda);
  }

  /// (P, R) with (P,R) · input = canonical().
  KElement to_canonical() const { return g.inverse(); }
};

namespace detail {

// Shared tail of both certifiers: check (P,R)·t against the canonical tuple
// and package the inverse element.
inline EqualityCertificate finish_certificate(Variant variant, const MatTuple& t, const KElement& to_canonical,
                                              double lambda, int d) {
  MatTuple image = k_action(to_canonical, t);
  MatTuple canon = variant == Variant::qpq ? canonical_qpq_tuple(t.n(), t.m(), lambda)
                                           : canonical_qn11_tuple(t.n(), t.m(), d, lambda);
  const double err = max_abs_diff(image, canon) / std::sqrt(t.norm_sq());
  if (!(err <= 1e-8))
    throw InconclusiveError(std::string("certify_equality_") + to_string(variant) +
                            ": margin within tolerance but the normal form is only reproduced to " +
                            std::to_string(err));
  return EqualityCertificate{variant, to_canonical.inverse(), lambda, d, err};
}

// Common margin gate: nullopt above 10·tol, inconclusive in (tol, 10·tol].
inline bool passes_margin_gate(const Margin& mg, double tol, const char* who) {
  const double nm = mg.normalized();
  if (nm > 10 * tol) return false;
  if (nm > tol)
    throw InconclusiveError(std::string(who) + ": normalized margin " + std::to_string(nm) +
                            " lies in the inconclusive band");
  return true;
}

}  // namespace detail

/// Returns (P,R), λ with (P,R)·t = (λ diag(C1,0), λ diag(C2,0), 0, ...) when
/// t attains equality in the Q(p,q) bound; nullopt when the unit-normalized
/// margin exceeds 10·tol; InconclusiveError inside (tol, 10·tol].
inline std::optional<EqualityCertificate> certify_equality_qpq(const MatTuple& t, const QSpace& space,
                                                               double tol = 1e-8, double member_tol = 1e-10) {
  require_qpq(t, space, member_tol, "certify_equality_qpq");
  const int n = space.n(), p = space.p(), m = t.m();
  const double total = t.norm_sq();
  if (total == 0) return EqualityCertificate{Variant::qpq, KElement::identity(n, m), 0.0, 0, 0.0};
  if (!detail::passes_margin_gate(ddvv_margin(t, Variant::qpq, space), tol, "certify_equality_qpq"))
    return std::nullopt;

  // Coefficient matrix of the unit tuple; at equality BBᵀ has spectrum {½, ½, 0, ...}.
  Matrix coeff = coefficients(t, space) / std::sqrt(total);
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  if (sv.size() < 2) throw std::logic_error("certify_equality_qpq: equality needs two independent members");
  const double s1 = sv(0) * sv(0), s2 = sv(1) * sv(1);
  const double rest = 1.0 - s1 - s2;
  if (rest > 0.1 || std::abs(s1 - s2) > 0.1) {
    // Four equal eigenvalues ¼, the only other candidate, fails stationarity.
    throw std::logic_error("certify_equality_qpq: spectrum of BBᵀ contradicts the equality analysis");
  }

  // Q̂_1, Q̂_2 with (B_1..B_m)W = √c (Q̂_1, Q̂_2, 0, ...). U = 2Q̂_1 and V = 2Q̂_2
  // are anticommuting involutions on a 4-dimensional support.
  const Matrix& left = svd.matrixU();
  Matrix u_op = 2 * from_coefficients(left.col(0), space)[0];
  Matrix v_op = 2 * from_coefficients(left.col(1), space)[0];

  // A unit v1 in the support and inside the first p coordinates is orthogonal
  // to U v1, V v1 (grading) and UV v1 (skew), so {v1, −UVv1, Uv1, −Vv1}
  // carries (U, V) to (C1, C2).
  Matrix support = u_op * u_op;
  Eigen::SelfAdjointEigenSolver<Matrix> es(support.topLeftCorner(p, p));
  Vector v1 = Vector::Zero(n);
  v1.head(p) = es.eigenvectors().col(p - 1);
  v1.normalize();
  Matrix frame(n, 4);
  frame.col(0) = v1;
  frame.col(1) = -(u_op * (v_op * v1));
  frame.col(2) = u_op * v1;
  frame.col(3) = -(v_op * v1);

  Eigen::HouseholderQR<Matrix> qr(frame);
  Matrix P = qr.householderQ() * Matrix::Identity(n, n);
  for (int k = 0; k < 4; ++k)
    if (qr.matrixQR()(k, k) < 0) P.col(k) = -P.col(k);

  const double lambda = std::sqrt(total) * (sv(0) + sv(1)) / 4.0;
  return detail::finish_certificate(Variant::qpq, t, KElement(P, svd.matrixV(), 1e-10), lambda, 2);
}

/// Returns (P,R), λ, d with (P,R)·t = (λ D_1, ..., λ D_d, 0, ...) when t
/// attains equality in the Q(n−1,1) bound. Same gating as the qpq version.
inline std::optional<EqualityCertificate> certify_equality_qn11(const MatTuple& t, double tol = 1e-8,
                                                                double member_tol = 1e-10) {
  if (t.n() < 3) throw InputError("certify_equality_qn11: needs n >= 3");
  const int n = static_cast<int>(t.n()), m = t.m();
  QSpace space(n - 1, 1);
  require_qpq(t, space, member_tol, "certify_equality_qn11");
  if (t.norm_sq() == 0) return EqualityCertificate{Variant::qn11, KElement::identity(n, m), 0.0, 0, 0.0};
  Margin mg = ddvv_margin(t, Variant::qn11);
  if (!detail::passes_margin_gate(mg, tol, "certify_equality_qn11")) return std::nullopt;

  Matrix b(n - 1, m);
  for (int r = 0; r < m; ++r) b.col(r) = t[r].col(n - 1).head(n - 1);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int d = mg.d;
  const double lambda = svd.singularValues().head(d).mean();
  Matrix P = Matrix::Identity(n, n);
  P.topLeftCorner(n - 1, n - 1) = svd.matrixU();
  return detail::finish_certificate(Variant::qn11, t, KElement(P, svd.matrixV(), 1e-10), lambda, d);
}

/// Falsification probe for the three-matrix obstruction: true iff all three
/// members are nonzero and every pair attains the BW-type equality (within
/// tol on unit-normalized members). Must never return true.
inline bool bw_triple_obstruction(const Matrix& b1, const Matrix& b2, const Matrix& b3, const QSpace& space,
                                  double tol = 1e-8, double member_tol = 1e-10) {
  const Matrix* mats[3] = {&b1, &b2, &b3};
  Matrix unit[3];
  for (int k = 0; k < 3; ++k) {
    if (!membership_qpq(*mats[k], space, member_tol))
      throw InputError("bw_triple_obstruction: member outside Q(p,q)");
    const double nn = mats[k]->squaredNorm();
    if (nn <= tol) return false;
    unit[k] = *mats[k] / std::sqrt(nn);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (1.0 - commutator(unit[a], unit[b]).squaredNorm() > tol) return false;
  return true;
}

/// Pointwise algebraic step of the gap theorem:
/// Σ‖[A_r,A_s]‖² + Σ⟨A_r,A_s⟩² <= S², S = Σ‖A_r‖².
struct SimonsBound {
  double lhs = 0;
  double rhs = 0;
  double margin() const { return rhs - lhs; }
};

inline SimonsBound simons_algebraic_bound(const MatTuple& t, const QSpace& space, double member_tol = 1e-10) {
  require_qpq(t, space, member_tol, "simons_algebraic_bound");
  SimonsBound out;
  out.lhs = comm_sum_blocks(qpq_blocks(t, space)) + gram(t).squaredNorm();
  const double s = t.norm_sq();
  out.rhs = s * s;
  return out;
}

}  // namespace austere
