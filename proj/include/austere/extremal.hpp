#pragma once

// Extremal search for the sharp constants and the analytic objects of the
// quadratic-form reduction: f_Q on the simplex, Lagrange stationarity
// residuals, and the combinatorial λ-profile bounds.

#include <austere/compound.hpp>
#include <austere/ddvv.hpp>

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace austere {

/// x >= 0 with Σ x_α = 1.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector x) : x_(std::move(x)) {
    if ((x_.array() < 0).any()) throw InputError("SimplexPoint: negative coordinate");
    if (std::abs(x_.sum() - 1.0) > 1e-12) throw InputError("SimplexPoint: coordinates must sum to 1");
  }
  const Vector& x() const { return x_; }

 private:
  Vector x_;
};

/// f_Q(x) = Σ x_α x_β ‖[Q̂_α,Q̂_β]‖² − ½ (Σ x_α)². The Q(p,q) bound is
/// equivalent to f_Q <= 0 on the nonnegative orthant for every Q.
inline double f_Q(const Vector& x, const Matrix& q, const QSpace& space) {
  if (x.size() != space.dim()) throw InputError("f_Q: x must have length p*q");
  if (orthogonality_defect(q) > 1e-10) throw InputError("f_Q: Q is not orthogonal");
  Matrix k = pair_comm_norms(rotated_basis(q, space));
  const double s = x.sum();
  return x.dot(k * x) - 0.5 * s * s;
}

struct LagrangeResidual {
  /// Mean of g over the active coordinates.
  double a = 0;
  /// g on the inactive coordinates α >= γ.
  Vector b;
  /// g_α = Σ_β x_β ‖[Q̂_α,Q̂_β]‖² − ½ Σ_β x_β for every α.
  Vector g;
  /// max |g_α − a| over the active coordinates.
  double residual = 0;
};

/// Stationarity pattern of f_Q restricted to the face where the first γ
/// coordinates are free. x must be sorted nonincreasing with x_γ > x_{γ+1}.
inline LagrangeResidual lagrange_residual(const Vector& x, const Matrix& q, const QSpace& space, int gamma) {
  const int n = space.dim();
  if (x.size() != n) throw InputError("lagrange_residual: x must have length p*q");
  if (gamma < 1 || gamma > n) throw InputError("lagrange_residual: active count out of range");
  for (int a = 0; a + 1 < n; ++a)
    if (x(a) < x(a + 1)) throw InputError("lagrange_residual: x must be sorted nonincreasing");
  if (gamma < n && !(x(gamma - 1) > x(gamma)))
    throw InputError("lagrange_residual: active entries must exceed the inactive ones");
  if (orthogonality_defect(q) > 1e-10) throw InputError("lagrange_residual: Q is not orthogonal");

  Matrix k = pair_comm_norms(rotated_basis(q, space));
  LagrangeResidual out;
  out.g = k * x - Vector::Constant(n, 0.5 * x.sum());
  out.a = out.g.head(gamma).mean();
  out.b = out.g.tail(n - gamma);
  out.residual = (out.g.head(gamma).array() - out.a).abs().maxCoeff();
  return out;
}

/// Sharp constant c with Σ‖[B_r,B_s]‖² <= c (Σ‖B_r‖²)² over m-tuples in Q(p,q).
inline double theoretical_constant(const QSpace& space, int m) {
  if (m < 2 || space.n() < 3) return 0.0;
  if (std::min(space.p(), space.q()) >= 2) return 0.5;
  const int d = std::min(m, space.dim());
  return (d - 1.0) / (2.0 * d);
}

/// F(C) = Σ_{r,s} ‖[B_r,B_s]‖² for the tuple with N x m coefficient matrix C,
/// and its Euclidean gradient in C.
class QuarticObjective {
 public:
  explicit QuarticObjective(QSpace space) : space_(space) {}

  double value(const Matrix& c) const { return comm_sum_blocks(blocks(c)); }

  /// ∂F/∂B_r = 4 Σ_s [B_s, [B_s, B_r]], projected on the basis Ê_α.
  Matrix gradient(const Matrix& c) const {
    MatTuple t = from_coefficients(c, space_);
    const int m = t.m();
    Matrix out(space_.dim(), m);
    for (int r = 0; r < m; ++r) {
      Matrix d = Matrix::Zero(space_.n(), space_.n());
      for (int s = 0; s < m; ++s)
        if (s != r) d += commutator(t[s], commutator(t[s], t[r]));
      d *= 4.0;
      for (int a = 0; a < space_.dim(); ++a) {
        auto [i, j] = space_.entry(a);
        out(a, r) = kSqrt2 * d(i, j);
      }
    }
    return out;
  }

  std::vector<Matrix> blocks(const Matrix& c) const {
    std::vector<Matrix> out;
    out.reserve(c.cols());
    for (Eigen::Index r = 0; r < c.cols(); ++r) {
      Matrix a(space_.p(), space_.q());
      for (int alpha = 0; alpha < space_.dim(); ++alpha) {
        auto [i, k] = lex::rect_unrank(alpha, space_.q());
        a(i, k) = kInvSqrt2 * c(alpha, r);
      }
      out.push_back(std::move(a));
    }
    return out;
  }

  const QSpace& space() const { return space_; }

 private:
  QSpace space_;
};

enum class AscentMethod { lbfgs, gradient };

struct SearchOptions {
  AscentMethod method = AscentMethod::lbfgs;
  /// Curvature pairs kept by the quasi-Newton method.
  int memory = 8;
  int restarts = 50;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  double grad_tol = 1e-9;
  int threads = thread_count();
  bool record_trace = false;
};

struct SearchResult {
  double best_ratio = 0;
  MatTuple argmax;
  /// Iterations used by the best restart.
  int iterations = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  int best_restart = -1;
  /// Objective per iteration of the best restart (when requested).
  std::vector<double> trace;
};

namespace detail {

struct AscentRun {
  Matrix c;
  double value = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

// Riemannian gradient ascent on the unit sphere ‖C‖_F = 1 with Armijo
// backtracking and renormalization as the retraction.
inline AscentRun sphere_ascent(const QuarticObjective& obj, Matrix c, const SearchOptions& opt) {
  AscentRun run;
  c /= c.norm();
  double f = obj.value(c);
  double step = 1.0;
  if (opt.record_trace) run.trace.push_back(f);
  for (int it = 0; it < opt.max_iters; ++it) {
    Matrix g = obj.gradient(c);
    g -= (g.array() * c.array()).sum() * c;
    const double gn2 = g.squaredNorm();
    if (std::sqrt(gn2) < opt.grad_tol) {
      run.converged = true;
      break;
    }
    double t = std::min(step * 2.0, 1e3);
    Matrix next;
    double fn = f;
    bool accepted = false;
    while (t > 1e-14) {
      next = c + t * g;
      next /= next.norm();
      fn = obj.value(next);
      if (fn >= f + 1e-4 * t * gn2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++run.iterations;
    if (!accepted) {
      // No representable ascent left: the objective is flat to rounding.
      run.converged = std::sqrt(gn2) < 1e3 * opt.grad_tol;
      break;
    }
    c = std::move(next);
    f = fn;
    step = t;
    if (opt.record_trace) run.trace.push_back(f);
  }
  run.c = std::move(c);
  run.value = f;
  return run;
}

// Limited-memory BFGS on the same sphere. Directions come from the two-loop
// recursion on tangent vectors; curvature pairs are formed after retraction
// and dropped when s·y <= 0. Plain gradient steps converge sublinearly at
// the degenerate maximizers, this does not.
inline AscentRun sphere_lbfgs(const QuarticObjective& obj, Matrix c, const SearchOptions& opt) {
  AscentRun run;
  auto dot = [](const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); };
  auto tangent = [&](Matrix v, const Matrix& at) {
    v -= dot(v, at) * at;
    return v;
  };
  c /= c.norm();
  double f = obj.value(c);
  Matrix g = tangent(obj.gradient(c), c);
  std::vector<Matrix> ss, ys;
  std::vector<double> rho;
  if (opt.record_trace) run.trace.push_back(f);
  for (int it = 0; it < opt.max_iters; ++it) {
    const double gn = g.norm();
    if (gn < opt.grad_tol) {
      run.converged = true;
      break;
    }
    // Ascent on F is descent on −F; run the recursion on q = −g.
    Matrix q = -g;
    const std::size_t k = ss.size();
    std::vector<double> alpha(k);
    for (std::size_t i = k; i-- > 0;) {
      alpha[i] = rho[i] * dot(ss[i], q);
      q -= alpha[i] * ys[i];
    }
    if (k > 0) q *= dot(ss.back(), ys.back()) / ys.back().squaredNorm();
    for (std::size_t i = 0; i < k; ++i) {
      const double beta = rho[i] * dot(ys[i], q);
      q += (alpha[i] - beta) * ss[i];
    }
    Matrix dir = tangent(-q, c);
    double slope = dot(dir, g);
    if (!(slope > 0)) {
      ss.clear();
      ys.clear();
      rho.clear();
      dir = g;
      slope = gn * gn;
    }
    double t = 1.0;
    Matrix next;
    double fn = f;
    bool accepted = false;
    while (t > 1e-14) {
      next = c + t * dir;
      next /= next.norm();
      fn = obj.value(next);
      if (fn >= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++run.iterations;
    if (!accepted) {
      if (!ss.empty()) {
        // Retry from a clean memory before giving up.
        ss.clear();
        ys.clear();
        rho.clear();
        continue;
      }
      run.converged = gn < 1e3 * opt.grad_tol;
      break;
    }
    Matrix gn_next = tangent(obj.gradient(next), next);
    Matrix s = tangent(next - c, next);
    Matrix y = -(gn_next - tangent(g, next));
    const double sy = dot(s, y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      if (static_cast<int>(ss.size()) == opt.memory) {
        ss.erase(ss.begin());
        ys.erase(ys.begin());
        rho.erase(rho.begin());
      }
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      rho.push_back(1.0 / sy);
    }
    c = std::move(next);
    f = fn;
    g = std::move(gn_next);
    if (opt.record_trace) run.trace.push_back(f);
  }
  run.c = std::move(c);
  run.value = f;
  return run;
}

}  // namespace detail

/// Maximizes Σ‖[B_r,B_s]‖² over m-tuples in Q(p,q) with Σ‖B_r‖² = 1. Each
/// restart draws its start from stream (seed, restart) so the result does not
/// depend on the thread count.
inline SearchResult maximize_ratio(const QSpace& space, int m, const SearchOptions& opt = {}) {
  if (m < 1) throw InputError("maximize_ratio: m must be >= 1");
  if (opt.restarts < 1) throw InputError("maximize_ratio: restarts must be >= 1");
  SearchResult res;
  res.restarts = opt.restarts;
  res.seed = opt.seed;
  QuarticObjective obj(space);
  if (m == 1) {
    // A single matrix commutes with itself.
    Rng rng = make_stream(opt.seed, 0);
    res.argmax = random_qpq_tuple(space, 1, rng).normalized();
    res.best_ratio = 0;
    res.converged = true;
    res.best_restart = 0;
    if (opt.record_trace) res.trace.push_back(0.0);
    return res;
  }
  std::vector<detail::AscentRun> runs(opt.restarts);
  parallel_for(
      runs.size(),
      [&](std::size_t k) {
        Rng rng = make_stream(opt.seed, k);
        Matrix start = gaussian_matrix(space.dim(), m, rng);
        runs[k] = opt.method == AscentMethod::lbfgs ? detail::sphere_lbfgs(obj, std::move(start), opt)
                                                    : detail::sphere_ascent(obj, std::move(start), opt);
      },
      opt.threads);
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].value > runs[best].value) best = k;
  auto& win = runs[best];
  res.best_ratio = win.value;
  res.argmax = from_coefficients(win.c, space);
  res.iterations = win.iterations;
  res.converged = win.converged;
  res.best_restart = static_cast<int>(best);
  res.trace = std::move(win.trace);
  return res;
}

/// λ_1 >= ... >= λ_q >= 0 with Σ λ_i² = ½.
class LambdaProfile {
 public:
  explicit LambdaProfile(std::vector<double> lambda) : l_(std::move(lambda)) {
    if (l_.empty()) throw InputError("LambdaProfile: empty profile");
    double s = 0;
    for (std::size_t i = 0; i < l_.size(); ++i) {
      if (l_[i] < 0) throw InputError("LambdaProfile: negative entry");
      if (i > 0 && l_[i] > l_[i - 1]) throw InputError("LambdaProfile: entries must be nonincreasing");
      s += l_[i] * l_[i];
    }
    if (std::abs(s - 0.5) > 1e-12) throw InputError("LambdaProfile: Σλ² must equal 1/2");
  }

  /// Sorts nonincreasing and rescales |·| to Σλ² = ½.
  static LambdaProfile normalized(std::vector<double> raw) {
    double s = 0;
    for (auto& v : raw) {
      v = std::abs(v);
      s += v * v;
    }
    if (s == 0) throw InputError("LambdaProfile: zero vector");
    const double c = std::sqrt(0.5 / s);
    for (auto& v : raw) v *= c;
    std::sort(raw.begin(), raw.end(), std::greater<>());
    return LambdaProfile(std::move(raw));
  }

  const std::vector<double>& values() const { return l_; }
  int size() const { return static_cast<int>(l_.size()); }

  /// I = {(i,j) : i < j, λ_i + λ_j > 1/√2}, 0-based, lexicographic.
  std::vector<std::pair<int, int>> index_set() const {
    std::vector<std::pair<int, int>> out;
    lex::for_each_pair(size(), [&](int, int i, int j) {
      if (l_[i] + l_[j] > kInvSqrt2) out.emplace_back(i, j);
    });
    return out;
  }

 private:
  std::vector<double> l_;
};

/// Σ_{(i,j)∈I} [(λ_i + λ_j)² − ½], bounded by ½.
inline double pair_excess(const LambdaProfile& profile) {
  const auto& l = profile.values();
  double s = 0;
  for (auto [i, j] : profile.index_set()) s += (l[i] + l[j]) * (l[i] + l[j]) - 0.5;
  return s;
}

enum class IndexSetShape { Empty, Fan, Triangle };

struct IndexSetClass {
  IndexSetShape shape = IndexSetShape::Empty;
  int n0 = 0;
};

/// I is empty, a fan {(1,j) : 2 <= j <= n0+1}, or the triangle
/// {(1,2),(1,3),(2,3)}. Any other shape throws std::logic_error.
inline IndexSetClass classify_index_set(const LambdaProfile& profile) {
  auto set = profile.index_set();
  const int n0 = static_cast<int>(set.size());
  if (n0 == 0) return {IndexSetShape::Empty, 0};
  bool fan = true;
  for (int k = 0; k < n0; ++k)
    if (set[k] != std::make_pair(0, k + 1)) fan = false;
  if (fan) return {IndexSetShape::Fan, n0};
  const std::vector<std::pair<int, int>> triangle = {{0, 1}, {0, 2}, {1, 2}};
  if (set == triangle) return {IndexSetShape::Triangle, 3};
  throw std::logic_error("classify_index_set: index set is neither a fan nor the triangle");
}

/// Σ_{β∈J} (‖[Q̂_α,Q̂_β]‖² − ½), bounded by ½ for every orthogonal Q.
inline double subset_excess(const Matrix& q, int alpha, const std::vector<int>& subset, const QSpace& space) {
  const int n = space.dim();
  if (alpha < 0 || alpha >= n) throw InputError("subset_excess: alpha out of range");
  for (int b : subset)
    if (b < 0 || b >= n) throw InputError("subset_excess: subset index out of range");
  if (orthogonality_defect(q) > 1e-10) throw InputError("subset_excess: Q is not orthogonal");
  if (subset.empty()) return 0.0;
  auto basis = rotated_basis(q, space);
  double s = 0;
  for (int b : subset) s += commutator(basis[alpha], basis[b]).squaredNorm() - 0.5;
  return s;
}

struct ExcessSearch {
  double best_value = -INFINITY;
  std::size_t grid_points = 0;
  /// Grid points (sorted profiles) evaluated, and the best grid value.
  double best_grid_value = -INFINITY;
  /// Distinct local-search endpoints, best first.
  std::vector<std::pair<double, LambdaProfile>> maxima;
};

namespace detail {

inline void sorted_compositions(int total, int parts, int cap, std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int v = std::min(total, cap); v >= 0; --v) {
    if (v * parts < total) break;
    cur.push_back(v);
    sorted_compositions(total - v, parts - 1, v, cur, out);
    cur.pop_back();
  }
}

// Compass search on the sphere Σλ² = ½ with renormalization after each move.
inline std::pair<double, std::vector<double>> pair_excess_local(std::vector<double> l, double h) {
  double best = pair_excess(LambdaProfile::normalized(l));
  l = LambdaProfile::normalized(l).values();
  while (h > 1e-13) {
    bool improved = false;
    for (std::size_t i = 0; i < l.size(); ++i)
      for (double sign : {1.0, -1.0}) {
        std::vector<double> cand = l;
        cand[i] += sign * h;
        if (cand[i] < 0) cand[i] = 0;
        bool nonzero = std::any_of(cand.begin(), cand.end(), [](double v) { return v > 0; });
        if (!nonzero) continue;
        LambdaProfile p = LambdaProfile::normalized(cand);
        double v = pair_excess(p);
        if (v > best) {
          best = v;
          l = p.values();
          improved = true;
        }
      }
    if (!improved) h *= 0.5;
  }
  return {best, l};
}

}  // namespace detail

/// Grid over the simplex of weights w_i = 2λ_i² with the given step, plus a
/// compass-search local optimizer started from every grid point.
inline ExcessSearch maximize_pair_excess(int q, double step = 0.01) {
  if (q < 1) throw InputError("maximize_pair_excess: q must be >= 1");
  const int total = static_cast<int>(std::lround(1.0 / step));
  std::vector<std::vector<int>> grid;
  std::vector<int> cur;
  detail::sorted_compositions(total, q, total, cur, grid);
  ExcessSearch out;
  out.grid_points = grid.size();
  std::vector<std::pair<double, std::vector<double>>> ends(grid.size());
  std::vector<double> grid_values(grid.size());
  parallel_for(grid.size(), [&](std::size_t g) {
    std::vector<double> l(q);
    for (int i = 0; i < q; ++i) l[i] = std::sqrt(0.5 * grid[g][i] / total);
    grid_values[g] = pair_excess(LambdaProfile::normalized(l));
    ends[g] = detail::pair_excess_local(l, step);
  });
  for (double v : grid_values) out.best_grid_value = std::max(out.best_grid_value, v);
  std::sort(ends.begin(), ends.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [v, l] : ends) {
    out.best_value = std::max(out.best_value, v);
    bool dup = false;
    for (auto& [mv, mp] : out.maxima) {
      double dist = 0;
      for (int i = 0; i < q; ++i) dist = std::max(dist, std::abs(mp.values()[i] - l[i]));
      if (dist < 1e-5) dup = true;
    }
    if (!dup) out.maxima.emplace_back(v, LambdaProfile::normalized(l));
  }
  return out;
}

}  // namespace austere
