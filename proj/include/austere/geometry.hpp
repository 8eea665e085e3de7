#pragma once

// Pointwise extrinsic curvature from shape-operator tuples, and the
// generalized helicoid chart with closed-form derivatives.

#include <austere/ddvv.hpp>
#include <austere/matspace.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <functional>
#include <vector>

namespace austere {

struct ShapeOperatorTuple {
  /// A_r in an orthonormal tangent frame, one per normal direction.
  MatTuple shape;
  /// Curvature of the ambient space form.
  double kappa = 0;
};

struct CurvatureReport {
  double rho = 0;
  double rho_perp = 0;
  double mean_sq = 0;
  double kappa_minus_rho = 0;
  double S = 0;
  int d = 0;
  /// ‖H‖² + κ − ρ − ρ⊥.
  double margin_classic = 0;
  /// (√2/2)(κ − ρ) − ρ⊥.
  double margin_qpq = 0;
  /// √((d−1)/(2d)) (κ − ρ) − ρ⊥.
  double margin_qn11 = 0;
  /// Set when ‖H‖ > tol: the sharpened bounds assume a minimal submanifold.
  bool out_of_hypothesis = false;
};

inline CurvatureReport curvature_report(const ShapeOperatorTuple& st, double tol = 1e-9) {
  const MatTuple& t = st.shape;
  const int n = static_cast<int>(t.n());
  if (n < 2) throw InputError("curvature_report: dimension must be >= 2");
  const double nn1 = n * (n - 1.0);
  CurvatureReport rep;
  rep.S = t.norm_sq();

  double trace_sq = 0;
  for (const auto& a : t) trace_sq += a.trace() * a.trace();
  rep.mean_sq = trace_sq / (double(n) * n);

  // Gauss: sectional curvature K(e_i,e_j) = κ + Σ_r (A_ii A_jj − A_ij²).
  double sec = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double k = st.kappa;
      for (const auto& a : t) k += a(i, i) * a(j, j) - a(i, j) * a(i, j);
      sec += k;
    }
  rep.rho = 2.0 * sec / nn1;
  rep.kappa_minus_rho = st.kappa - rep.rho;

  rep.rho_perp = t.m() < 2 ? 0.0 : std::sqrt(comm_sum(t)) / nn1;
  rep.d = span_dim(t);

  rep.margin_classic = rep.mean_sq + st.kappa - rep.rho - rep.rho_perp;
  rep.margin_qpq = kInvSqrt2 * rep.kappa_minus_rho - rep.rho_perp;
  const double c_qn11 = rep.d >= 1 ? std::sqrt((rep.d - 1.0) / (2.0 * rep.d)) : 0.0;
  rep.margin_qn11 = c_qn11 * rep.kappa_minus_rho - rep.rho_perp;
  rep.out_of_hypothesis = std::sqrt(rep.mean_sq) > tol;
  return rep;
}

/// A parametrized map f: R^n → R^N with closed-form derivatives.
struct ImmersionChart {
  int n = 0;
  int ambient = 0;
  std::function<Vector(const Vector&)> value;
  /// N x n matrix of first partials ∂_i f.
  std::function<Matrix(const Vector&)> jacobian;
  /// One n x n Hessian per ambient coordinate.
  std::function<std::vector<Matrix>(const Vector&)> hessians;
};

struct HelicoidParams {
  int s = 0;
  int n = 0;
  double lambda0 = 0;
  /// λ_1 >= ... >= λ_s > 0.
  std::vector<double> lambdas;
};

inline void validate(const HelicoidParams& hp) {
  if (hp.s < 2 || hp.s >= hp.n) throw InputError("helicoid: need 2 <= s < n");
  if (!(hp.lambda0 >= 0)) throw InputError("helicoid: lambda0 must be >= 0");
  if (static_cast<int>(hp.lambdas.size()) != hp.s) throw InputError("helicoid: need exactly s winding rates");
  for (int k = 0; k < hp.s; ++k) {
    if (!(hp.lambdas[k] > 0)) throw InputError("helicoid: winding rates must be positive");
    if (k > 0 && hp.lambdas[k] > hp.lambdas[k - 1]) throw InputError("helicoid: winding rates must be nonincreasing");
  }
}

/// f(x) = (λ0 x0, x_k cos(λ_k x0), x_k sin(λ_k x0) for k = 1..s, x_{s+1}, ..., x_{n-1})
/// in R^{n+s}.
inline ImmersionChart helicoid_chart(const HelicoidParams& hp) {
  validate(hp);
  const int n = hp.n, s = hp.s, big = hp.n + hp.s;
  ImmersionChart c;
  c.n = n;
  c.ambient = big;
  auto check = [n](const Vector& x) {
    if (x.size() != n) throw InputError("helicoid: point has wrong dimension");
  };
  c.value = [hp, n, s, big, check](const Vector& x) {
    check(x);
    Vector f(big);
    f(0) = hp.lambda0 * x(0);
    for (int k = 1; k <= s; ++k) {
      const double th = hp.lambdas[k - 1] * x(0);
      f(2 * k - 1) = x(k) * std::cos(th);
      f(2 * k) = x(k) * std::sin(th);
    }
    for (int j = s + 1; j < n; ++j) f(s + j) = x(j);
    return f;
  };
  c.jacobian = [hp, n, s, big, check](const Vector& x) {
    check(x);
    Matrix jac = Matrix::Zero(big, n);
    jac(0, 0) = hp.lambda0;
    for (int k = 1; k <= s; ++k) {
      const double l = hp.lambdas[k - 1], th = l * x(0);
      jac(2 * k - 1, 0) = -x(k) * l * std::sin(th);
      jac(2 * k, 0) = x(k) * l * std::cos(th);
      jac(2 * k - 1, k) = std::cos(th);
      jac(2 * k, k) = std::sin(th);
    }
    for (int j = s + 1; j < n; ++j) jac(s + j, j) = 1.0;
    return jac;
  };
  c.hessians = [hp, n, s, big, check](const Vector& x) {
    check(x);
    std::vector<Matrix> h(big, Matrix::Zero(n, n));
    for (int k = 1; k <= s; ++k) {
      const double l = hp.lambdas[k - 1], th = l * x(0);
      h[2 * k - 1](0, 0) = -x(k) * l * l * std::cos(th);
      h[2 * k](0, 0) = -x(k) * l * l * std::sin(th);
      h[2 * k - 1](0, k) = h[2 * k - 1](k, 0) = -l * std::sin(th);
      h[2 * k](0, k) = h[2 * k](k, 0) = l * std::cos(th);
    }
    return h;
  };
  return c;
}

/// Smallest singular value of the Jacobian; 0 where the chart fails to be an immersion.
inline double immersion_min_singular(const ImmersionChart& chart, const Vector& x) {
  Eigen::JacobiSVD<Matrix> svd(chart.jacobian(x));
  return svd.singularValues().minCoeff();
}

/// Shape operators A_r = g^{-1/2} h^r g^{-1/2}, where h^r_ij = ⟨∂_i∂_j f, ξ_r⟩
/// and ξ_r completes the tangent space to an orthonormal ambient basis. The
/// tangent frame is e = J g^{-1/2}.
inline ShapeOperatorTuple second_fundamental_form(const ImmersionChart& chart, const Vector& x, double tol = 1e-8,
                                                  double kappa = 0.0) {
  const int n = chart.n, big = chart.ambient;
  Matrix jac = chart.jacobian(x);
  if (jac.rows() != big || jac.cols() != n) throw InputError("second_fundamental_form: Jacobian has the wrong shape");
  if (immersion_min_singular(chart, x) <= tol)
    throw DegenerateError("second_fundamental_form: chart is singular at this point");
  Matrix g = jac.transpose() * jac;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  Matrix g_isqrt = es.operatorInverseSqrt();
  Eigen::HouseholderQR<Matrix> qr(jac);
  Matrix full = qr.householderQ() * Matrix::Identity(big, big);
  auto hess = chart.hessians(x);
  std::vector<Matrix> shape;
  for (int r = n; r < big; ++r) {
    Matrix h = Matrix::Zero(n, n);
    for (int c = 0; c < big; ++c)
      if (full(c, r) != 0.0) h += full(c, r) * hess[c];
    shape.push_back(g_isqrt * h * g_isqrt);
  }
  if (shape.empty()) shape.push_back(Matrix::Zero(n, n));
  return {MatTuple(std::move(shape), 1e-9), kappa};
}

struct ScanRow {
  Vector point;
  CurvatureReport report;
};

/// Evaluates the curvature report on a uniform grid over [lo, hi]^n with
/// `grid` points per axis; rows are in lexicographic order of grid indices.
inline std::vector<ScanRow> helicoid_equality_scan(const HelicoidParams& hp, int grid = 9, double lo = -1.0,
                                                   double hi = 1.0, int threads = thread_count()) {
  validate(hp);
  if (!(hp.lambda0 > 0)) throw InputError("helicoid_equality_scan: lambda0 must be positive");
  if (grid < 1) throw InputError("helicoid_equality_scan: grid must be >= 1");
  if (!(lo <= hi)) throw InputError("helicoid_equality_scan: empty box");
  const auto chart = helicoid_chart(hp);
  std::size_t total = 1;
  for (int i = 0; i < hp.n; ++i) total *= static_cast<std::size_t>(grid);
  std::vector<ScanRow> rows(total);
  parallel_for(
      total,
      [&](std::size_t idx) {
        Vector x(hp.n);
        std::size_t v = idx;
        for (int i = hp.n - 1; i >= 0; --i) {
          const int k = static_cast<int>(v % grid);
          v /= grid;
          x(i) = grid == 1 ? lo : lo + (hi - lo) * k / (grid - 1.0);
        }
        rows[idx] = {x, curvature_report(second_fundamental_form(chart, x))};
      },
      threads);
  return rows;
}

}  // namespace austere
