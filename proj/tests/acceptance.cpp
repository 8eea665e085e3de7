// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include "support.hpp"

#include <austere/app.hpp>
#include <austere/clifford.hpp>
#include <austere/compound.hpp>
#include <austere/ddvv.hpp>
#include <austere/extremal.hpp>
#include <austere/geometry.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>

using namespace austere;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Counter-based uniform draws in [-1, 1).
struct CounterUniform {
  std::uint64_t key;
  std::uint64_t ctr = 0;
  double operator()() { return (splitmix64(key + ctr++) >> 11) * 0x1.0p-52 - 1.0; }
};

MatTuple c1c2_in(int p, int q, double lambda) {
  Matrix pi = testing_support::canonical_to_qpq(p, q);
  std::vector<Matrix> mats;
  for (const auto& a : canonical_qpq_tuple(p + q, 2, lambda)) mats.push_back(pi.transpose() * a * pi);
  return MatTuple(mats);
}

MatTuple block_image(const MatTuple& t, int p, int q, Rng& rng) {
  Matrix u = testing_support::random_block_orthogonal(p, q, rng);
  return k_action(KElement(u.transpose(), random_orthogonal(t.m(), rng)), t);
}

// ---------------------------------------------------------------------------

Verdict criterion1() {
  Verdict v;
  constexpr int kPerConfig = 100000;
  const auto t0 = Clock::now();
  double worst_qpq = INFINITY, worst_qn11 = INFINITY;
  long long tuples = 0;
  for (int p = 1; p <= 6; ++p)
    for (int q = 1; q <= 6; ++q)
      for (int m = 1; m <= 8; ++m) {
        CounterUniform u{splitmix64((std::uint64_t(p) << 16) ^ (std::uint64_t(q) << 8) ^ std::uint64_t(m))};
        Matrix stacked(p * m, q);
        for (int k = 0; k < kPerConfig; ++k) {
          for (Eigen::Index e = 0; e < stacked.size(); ++e) stacked.data()[e] = u();
          // Every hundredth tuple sits next to an equality configuration.
          if (k % 100 == 0) {
            stacked *= 1e-6;
            if (p >= 2 && q >= 2 && m >= 2) {
              stacked(0, 0) += 1;
              stacked(1, 1) += 1;
              stacked(p, 1) -= 1;
              stacked(p + 1, 0) += 1;
            } else {
              for (int r = 0; r < m && r < std::max(p, q); ++r) {
                if (q == 1 && r < p) stacked(r * p + r, 0) += 1;
                if (p == 1 && r < q) stacked(r, r) += 1;
              }
            }
          }
          const double a = ddvv_margin_stacked(stacked, m, Variant::qpq).normalized();
          worst_qpq = std::min(worst_qpq, a);
          if (q == 1 && p >= 2) worst_qn11 = std::min(worst_qn11, ddvv_margin_stacked(stacked, m, Variant::qn11).normalized());
          ++tuples;
        }
      }
  const double secs = seconds_since(t0);
  v.require(worst_qpq >= -1e-10, "qpq margin below -1e-10");
  v.require(worst_qn11 >= -1e-10, "qn11 margin below -1e-10");
  v.require(secs < 60, "runtime above 60 s");
  v.note(std::to_string(tuples) + " tuples, worst normalized margins qpq " + fmt("%.3g", worst_qpq) + ", qn11 " +
         fmt("%.3g", worst_qn11) + ", " + fmt("%.1f", secs) + " s");
  return v;
}

Verdict criterion2() {
  Verdict v;
  struct Case {
    int p, q, m;
  };
  for (Case c : {Case{2, 2, 2}, Case{4, 1, 2}, Case{4, 1, 3}, Case{4, 1, 4}}) {
    const auto t0 = Clock::now();
    QSpace sp(c.p, c.q);
    SearchOptions opt;
    opt.restarts = 50;
    auto res = maximize_ratio(sp, c.m, opt);
    const double secs = seconds_since(t0);
    const double target = theoretical_constant(sp, c.m);
    const std::string tag = "Q(" + std::to_string(c.p) + "," + std::to_string(c.q) + ") m=" + std::to_string(c.m);
    v.require(std::abs(res.best_ratio - target) <= 1e-6, tag + " ratio off target");
    v.require(secs < 30, tag + " above 30 s");
    v.note(tag + " gap " + fmt("%.2g", target - res.best_ratio) + " in " + fmt("%.2f", secs) + " s");
  }
  return v;
}

Verdict criterion3() {
  Verdict v;
  Rng rng(3003);
  std::uniform_int_distribution<int> small(2, 4), dim(3, 7), mm(2, 5);
  std::uniform_real_distribution<double> lam(0.1, 3.0);
  double worst_lambda = 0, worst_rec = 0;
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = small(rng), q = small(rng), m = mm(rng);
    const double lambda = lam(rng);
    std::vector<Matrix> mats = c1c2_in(p, q, lambda).mats();
    while (static_cast<int>(mats.size()) < m) mats.push_back(Matrix::Zero(p + q, p + q));
    MatTuple t = block_image(MatTuple(mats), p, q, rng);
    auto cert = certify_equality_qpq(t, QSpace(p, q));
    if (!cert) {
      ++failures;
      continue;
    }
    const double rec = max_abs_diff(k_action(cert->g, cert->canonical()), t) / lambda;
    worst_lambda = std::max(worst_lambda, std::abs(cert->lambda - lambda));
    worst_rec = std::max({worst_rec, rec, cert->reconstruction_error});
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dim(rng), m = mm(rng);
    const int d = 1 + static_cast<int>(rng() % std::min(m, n - 1));
    const double lambda = lam(rng);
    MatTuple t = block_image(canonical_qn11_tuple(n, m, d, lambda), n - 1, 1, rng);
    auto cert = certify_equality_qn11(t);
    if (!cert || cert->d != d) {
      ++failures;
      continue;
    }
    const double rec = max_abs_diff(k_action(cert->g, cert->canonical()), t) / lambda;
    worst_lambda = std::max(worst_lambda, std::abs(cert->lambda - lambda));
    worst_rec = std::max({worst_rec, rec, cert->reconstruction_error});
  }
  int false_certs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = mm(rng);
    if (trial % 2 == 0) {
      QSpace sp(small(rng), small(rng));
      if (certify_equality_qpq(random_qpq_tuple(sp, m, rng), sp)) ++false_certs;
    } else {
      const int n = dim(rng);
      if (certify_equality_qn11(random_qpq_tuple(QSpace(n - 1, 1), m, rng))) ++false_certs;
    }
  }
  v.require(failures == 0, std::to_string(failures) + " canonical images not certified");
  v.require(worst_lambda <= 1e-8, "lambda error above 1e-8");
  v.require(worst_rec <= 1e-8, "reconstruction error above 1e-8");
  v.require(false_certs == 0, std::to_string(false_certs) + " generic tuples certified");
  v.note("2000 images, worst lambda error " + fmt("%.2g", worst_lambda) + ", worst reconstruction " +
         fmt("%.2g", worst_rec) + "; 1000 generic tuples, " + std::to_string(false_certs) + " certified");
  return v;
}

Verdict criterion4() {
  Verdict v;
  using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  bool pattern = true, contraction = true;
  for (int p = 1; p <= 5; ++p)
    for (int q = 1; q <= 5; ++q) {
      const int n = p + q;
      std::vector<IMat> u;
      std::vector<std::pair<int, int>> idx;
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
          IMat e = IMat::Zero(n, n);
          e(i, p + j) = e(p + j, i) = 1;
          u.push_back(e);
          idx.emplace_back(i, j);
        }
      const std::size_t big = u.size();
      std::vector<IMat> comm(big * big);
      for (std::size_t a = 0; a < big; ++a)
        for (std::size_t b = 0; b < big; ++b) comm[a * big + b] = u[a] * u[b] - u[b] * u[a];
      for (std::size_t a = 0; a < big; ++a)
        for (std::size_t b = 0; b < big; ++b) {
          const bool differ = (idx[a].first == idx[b].first) != (idx[a].second == idx[b].second);
          if (comm[a * big + b].cwiseProduct(comm[a * big + b]).sum() != (differ ? 2 : 0)) pattern = false;
          long long s = 0;
          for (std::size_t c = 0; c < big; ++c) s += comm[a * big + c].cwiseProduct(comm[b * big + c]).sum();
          if (s != (a == b ? 2LL * (n - 2) : 0LL)) contraction = false;
        }
    }
  v.require(pattern, "commutator norm pattern broken");
  v.require(contraction, "commutator contraction broken");

  Rng rng(4004);
  double worst_rows = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    QSpace sp(1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5));
    Matrix k = pair_comm_norms(rotated_basis(random_orthogonal(sp.dim(), rng), sp));
    for (int a = 0; a < sp.dim(); ++a) worst_rows = std::max(worst_rows, std::abs(k.row(a).sum() - 0.5 * (sp.n() - 2)));
  }
  v.require(worst_rows <= 1e-10, "rotated row sums off by more than 1e-10");

  double worst_phi = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int a = 2 + static_cast<int>(rng() % 5), b = 2 + static_cast<int>(rng() % 5), c = 2 + static_cast<int>(rng() % 5);
    Matrix x = gaussian_matrix(a, b, rng), y = gaussian_matrix(b, c, rng);
    Matrix lhs = phi(x * y);
    worst_phi = std::max(worst_phi, max_abs(lhs - phi(x) * phi(y)) / std::max(1.0, max_abs(lhs)));
  }
  v.require(worst_phi <= 1e-10, "phi multiplicativity off by more than 1e-10");

  bool ident = true;
  for (int n = 2; n <= 10; ++n) {
    Matrix f = phi(Matrix::Identity(n, n));
    ident = ident && (f.array() == Matrix::Identity(f.rows(), f.cols()).array()).all();
  }
  v.require(ident, "phi(I) differs from I");
  v.note("integer patterns p,q <= 5 exact; row-sum error " + fmt("%.2g", worst_rows) + "; phi error " +
         fmt("%.2g", worst_phi));
  return v;
}

bool is_named_maximizer(const std::vector<double>& l) {
  const double h = 0.5, t = 1 / std::sqrt(6.0);
  auto close = [&](const std::vector<double>& ref) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      const double r = i < ref.size() ? ref[i] : 0.0;
      if (std::abs(l[i] - r) > 1e-4) return false;
    }
    return true;
  };
  return close({h, h}) || close({t, t, t});
}

Verdict criterion5() {
  Verdict v;
  double best = -INFINITY;
  std::vector<std::vector<double>> others;
  for (int q = 2; q <= 5; ++q) {
    auto res = maximize_pair_excess(q, q <= 3 ? 0.005 : (q == 4 ? 0.01 : 0.025));
    best = std::max(best, res.best_value);
    for (const auto& [val, prof] : res.maxima)
      if (val >= 0.5 - 1e-6 && !is_named_maximizer(prof.values())) others.push_back(prof.values());
  }
  v.require(std::abs(best - 0.5) <= 1e-6, "maximum differs from 0.5");
  // Direct witnesses: fans with n0 spokes, λ_1 = n0·b and b² = 1/(2 n0 (n0+1)).
  for (int n0 = 2; n0 <= 4; ++n0) {
    std::vector<double> raw(n0 + 1, 1.0);
    raw[0] = n0;
    auto prof = LambdaProfile::normalized(raw);
    const double val = pair_excess(prof);
    if (std::abs(val - 0.5) <= 1e-12) others.push_back(prof.values());
  }
  std::string list;
  for (std::size_t k = 0; k < others.size() && k < 3; ++k) {
    list += k ? " " : "";
    list += "(";
    for (std::size_t i = 0; i < others[k].size(); ++i) list += (i ? "," : "") + fmt("%.4f", others[k][i]);
    list += ")";
  }
  v.require(others.empty(), "maximum 0.5 also attained at " + std::to_string(others.size()) +
                                " further profiles, e.g. " + list);

  Rng rng(5005);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int classifier_failures = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    std::vector<double> raw(2 + trial % 7);
    const double power = 1 + trial % 4;
    for (auto& x : raw) x = std::pow(unif(rng), power);
    try {
      classify_index_set(LambdaProfile::normalized(raw));
    } catch (const std::logic_error&) {
      ++classifier_failures;
    }
  }
  v.require(classifier_failures == 0, std::to_string(classifier_failures) + " profiles outside fan/triangle");

  double worst23 = -INFINITY;
  for (int trial = 0; trial < 100000; ++trial) {
    QSpace sp(1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3));
    Matrix q = random_orthogonal(sp.dim(), rng);
    const int alpha = static_cast<int>(rng() % sp.dim());
    std::vector<int> subset;
    for (int b = 0; b < sp.dim(); ++b)
      if (rng() & 1) subset.push_back(b);
    worst23 = std::max(worst23, subset_excess(q, alpha, subset, sp));
  }
  v.require(worst23 <= 0.5 + 1e-10, "subset bound exceeds 1/2");
  v.note("max " + fmt("%.12f", best) + "; classifier failures " + std::to_string(classifier_failures) +
         "; largest subset sum " + fmt("%.6f", worst23));
  return v;
}

Verdict criterion6() {
  Verdict v;
  Rng rng(6006);
  double worst_bw = INFINITY;
  for (int trial = 0; trial < 100000; ++trial) {
    QSpace sp(1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 6));
    auto t = random_qpq_tuple(sp, 2, rng);
    Margin mg = bw_pair_margin(t[0], t[1], sp);
    worst_bw = std::min(worst_bw, mg.margin / mg.rhs);
  }
  v.require(worst_bw >= -1e-10, "pair bound violated");
  double eq_gap = 0;
  for (auto [p, q] : {std::pair{2, 2}, std::pair{3, 4}, std::pair{5, 2}}) {
    auto t = c1c2_in(p, q, 1.0);
    eq_gap = std::max(eq_gap, std::abs(bw_pair_margin(t[0], t[1], QSpace(p, q)).margin));
  }
  v.require(eq_gap <= 1e-12, "pair equality not reproduced");

  long long triples = 0, hits = 0;
  for (int trial = 0; trial < 1000000; ++trial) {
    const int p = 2 + static_cast<int>(rng() % 2), q = 2 + static_cast<int>(rng() % 2);
    QSpace sp(p, q);
    Matrix b1, b2, b3;
    switch (trial % 3) {
      case 0: {
        auto t = random_qpq_tuple(sp, 3, rng);
        b1 = t[0], b2 = t[1], b3 = t[2];
        break;
      }
      case 1: {
        auto pair = block_image(c1c2_in(p, q, 1.0), p, q, rng);
        b1 = pair[0], b2 = pair[1], b3 = random_qpq_tuple(sp, 1, rng)[0];
        break;
      }
      default: {
        auto pair = block_image(c1c2_in(p, q, 1.0), p, q, rng);
        std::normal_distribution<double> g;
        b1 = pair[0], b2 = pair[1], b3 = g(rng) * pair[0] + g(rng) * pair[1];
        break;
      }
    }
    ++triples;
    if (bw_triple_obstruction(b1, b2, b3, sp)) ++hits;
  }
  v.require(hits == 0, std::to_string(hits) + " pairwise-extremal triples found");

  double worst_simons = INFINITY;
  for (int trial = 0; trial < 100000; ++trial) {
    QSpace sp(1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5));
    auto t = random_qpq_tuple(sp, 1 + static_cast<int>(rng() % 6), rng);
    auto b = simons_algebraic_bound(t, sp);
    worst_simons = std::min(worst_simons, b.margin() / b.rhs);
  }
  v.require(worst_simons >= -1e-10, "algebraic gap bound violated");
  auto eq = simons_algebraic_bound(MatTuple({c1_matrix(), c2_matrix()}), QSpace(2, 2));
  v.require(eq.lhs == 64.0 && eq.rhs == 64.0, "C1/C2 gap equality differs from 64 = 64");
  v.note("pair margin " + fmt("%.2g", worst_bw) + "; " + std::to_string(triples) + " triples, " +
         std::to_string(hits) + " hits; gap margin " + fmt("%.2g", worst_simons) + "; C1/C2 " +
         fmt("%g", eq.lhs) + " = " + fmt("%g", eq.rhs));
  return v;
}

Verdict criterion7() {
  Verdict v;
  HelicoidParams hp{2, 3, 1.0, {1.0, 1.0}};
  auto chart = helicoid_chart(hp);
  auto axis = curvature_report(second_fundamental_form(chart, Vector::Zero(3)));
  v.require(std::abs(axis.rho + 2.0 / 3) <= 1e-12, "axis rho differs from -2/3");
  v.require(std::abs(axis.rho_perp - 1.0 / 3) <= 1e-12, "axis rho_perp differs from 1/3");
  v.require(std::abs(axis.margin_qn11) <= 1e-9, "axis margin_qn11 not at equality");
  Vector off(3);
  off << 0, 1, 0;
  auto off_axis = curvature_report(second_fundamental_form(chart, off));
  v.require(off_axis.margin_qn11 > 0, "off-axis margin_qn11 not positive");
  auto uneq = curvature_report(second_fundamental_form(helicoid_chart({2, 3, 1.0, {2.0, 1.0}}), Vector::Zero(3)));
  v.require(uneq.margin_qn11 > 0, "unequal-rate margin_qn11 not positive");

  Rng rng(7007);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  int non_austere = 0;
  const HelicoidParams fams[] = {hp, {2, 3, 1.0, {2.0, 1.0}}, {2, 4, 0.5, {1.5, 1.0}}, {3, 5, 1.0, {3.0, 2.0, 1.0}}};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& h = fams[trial % 4];
    Vector x(h.n);
    for (int i = 0; i < h.n; ++i) x(i) = unif(rng);
    for (const auto& a : second_fundamental_form(helicoid_chart(h), x).shape)
      if (!is_austere(a, 1e-9)) ++non_austere;
  }
  v.require(non_austere == 0, std::to_string(non_austere) + " non-austere shape operators");

  auto focal = curvature_report({focal_tuple(1, 2).tuple, 1.0});
  const double target = std::sqrt(2.0) / 5;
  v.require(std::abs(focal.rho_perp - target) <= 1e-12, "focal rho_perp differs from sqrt(2)/5");
  v.require(std::abs(kInvSqrt2 * focal.kappa_minus_rho - target) <= 1e-12, "focal (sqrt2/2)(kappa-rho) differs");
  v.note("axis rho " + fmt("%.15f", axis.rho) + ", rho_perp " + fmt("%.15f", axis.rho_perp) + ", margin_qn11 " +
         fmt("%.2g", axis.margin_qn11) + "; off-axis " + fmt("%.4g", off_axis.margin_qn11) + "; unequal " +
         fmt("%.4g", uneq.margin_qn11) + "; focal rho_perp " + fmt("%.15f", focal.rho_perp));
  return v;
}

Verdict criterion8() {
  Verdict v;
  const long long table[] = {1, 2, 4, 4, 8, 8, 8, 8};
  bool tab = true;
  for (int m = 1; m <= 8; ++m) tab = tab && delta(m) == table[m - 1];
  for (int m = 9; m <= 24; ++m) tab = tab && delta(m) == 16 * delta(m - 8);
  v.require(tab, "delta table or recursion mismatch");

  double worst = 0;
  for (int m = 0; m <= 12; ++m) {
    const int base = m == 0 ? 1 : static_cast<int>(delta(m));
    for (int mult : {1, 2}) worst = std::max(worst, check_system(build_system(m, base * mult).mats()).worst());
  }
  v.require(worst == 0.0, "built systems not exact");

  bool c12 = true;
  try {
    CliffordSystem sys({c1_matrix(), c2_matrix()}, 0.0);
    c12 = sys.l() == 2;
  } catch (const InputError&) {
    c12 = false;
  }
  v.require(c12, "{C1,C2} rejected");

  bool family = true;
  for (int k = 1; k <= 3; ++k) {
    family = family && extendable(2, 2 * k);
    auto p = focal_extension_involution(1, 2 * k);
    family = family && p.has_value() && involution_type_check(focal_tuple(1, 2 * k).tuple, *p) &&
             involution_splitting(*p) == std::make_pair(2 * k, 2 * k + 1);
  }
  v.require(family, "(1,2k) focal family not of type Q(2k,2k+1)");
  v.note("delta for m <= 24 consistent; systems m <= 12 exact; {C1,C2} valid; k = 1,2,3 split as (2k,2k+1)");
  return v;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = app::run(args, out, err);
  return {code, out.str()};
}

Verdict criterion9() {
  Verdict v;
  const std::string data = AUSTERE_DATA_DIR;
  const std::vector<std::vector<std::string>> runs = {
      {"verify", "--input", data + "/c1c2_q22.json"},
      {"verify", "--input", data + "/generic_q23.json", "--format", "csv"},
      {"search", "--p", "2", "--q", "3", "--m", "3", "--restarts", "6", "--seed", "11"},
      {"search", "--p", "4", "--q", "1", "--m", "3", "--restarts", "6", "--seed", "12", "--format", "csv"},
      {"clifford", "--m", "3", "--l", "4", "--extend-check"},
      {"helicoid", "--grid", "4"},
      {"helicoid", "--grid", "3", "--lambdas", "2,1", "--format", "json"},
      {"report", "--input", data + "/d1d2_q21.json", "--kappa", "1"},
      {"selftest"}};
  int mismatches = 0;
  for (const auto& args : runs) {
    auto a = cli(args), b = cli(args);
    if (a.code != b.code || a.out != b.out || a.out.empty()) {
      ++mismatches;
      v.require(false, "differing output for " + args.front());
    }
  }
  // Out of process as well.
  auto capture = [](const std::string& cmd) {
    std::string text;
    if (FILE* f = popen(cmd.c_str(), "r")) {
      char buf[4096];
      std::size_t k;
      while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, k);
      pclose(f);
    }
    return text;
  };
  const std::string cmd = std::string(AUSTERE_LAB_BIN) + " search --p 3 --q 2 --m 2 --restarts 4 --seed 5";
  const std::string first = capture(cmd), second = capture(cmd);
  v.require(!first.empty() && first == second, "binary output differs between runs");
  v.note(std::to_string(runs.size()) + " in-process invocations and one binary invocation compared byte for byte");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"inequality suite", criterion1},        {"sharp-constant recovery", criterion2},
      {"equality round trips", criterion3},    {"structural exactness", criterion4},
      {"profile oracles", criterion5},         {"pair, triple and gap bounds", criterion6},
      {"geometry", criterion7},                {"Clifford systems", criterion8},
      {"determinism", criterion9}};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must lie in 1..%zu\n", criteria.size());
    return 2;
  }
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only && static_cast<int>(k) + 1 != only) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu (%s) [%.1f s]: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                seconds_since(t0), v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
