#pragma once

// Command-line front end. Exit status: 0 success, 1 a bound was violated
// beyond 10·tol, 2 bad input.

#include <austere/clifford.hpp>
#include <austere/compound.hpp>
#include <austere/ddvv.hpp>
#include <austere/extremal.hpp>
#include <austere/geometry.hpp>
#include <austere/io.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace austere::app {

using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::string subcommand;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
  std::string format = "json";
  bool symmetrize = false;

  // verify
  std::string variant = "qpq";
  std::string gram_csv;
  // search
  int p = 2, q = 2, m = 2;
  int restarts = 50;
  int iters = 2000;
  double grad_tol = 1e-9;
  std::string trace;
  // clifford
  int cm = 1;
  int l = 2;
  bool extend_check = false;
  // helicoid
  int s = 2;
  int n = 3;
  double lambda0 = 1.0;
  std::vector<double> lambdas = {1.0, 1.0};
  int grid = 9;
  double lo = -1.0, hi = 1.0;
  // report
  double kappa = 0.0;
};

/// Outcome of one subcommand: the emitted document plus any bound violations.
struct Outcome {
  std::string text;
  std::vector<std::string> violations;
};

namespace detail {

inline Json header(const std::string& command) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

// "key,value" lines for the scalar top-level fields of a document.
inline std::string flat_csv(const Json& j) {
  std::string out = "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_structured()) continue;
    out += it.key() + ",";
    if (it.value().is_number_float())
      out += io::format_double(it.value().get<double>());
    else if (it.value().is_string())
      out += it.value().get<std::string>();
    else
      out += it.value().dump();
    out += '\n';
  }
  return out;
}

inline std::string emit(const Json& j, const RunConfig& cfg) { return cfg.format == "csv" ? flat_csv(j) : io::dump(j); }

inline Json certificate_json(const EqualityCertificate& c) {
  Json j;
  j["lambda"] = c.lambda;
  j["d"] = c.d;
  j["reconstruction_error"] = c.reconstruction_error;
  j["P"] = io::matrix_rows(c.g.P());
  j["R"] = io::matrix_rows(c.g.R());
  return j;
}

inline void check_margin(Outcome& o, const std::string& what, double value, double tol) {
  if (value < -10 * tol) o.violations.push_back(what + " = " + io::format_double(value));
}

inline Outcome cmd_verify(const RunConfig& cfg) {
  auto tf = io::read_tuple_file(cfg.input, cfg.symmetrize);
  const Variant variant = parse_variant(cfg.variant);
  const MatTuple& t = tf.tuple;
  if ((variant == Variant::qpq || variant == Variant::bw_pair) && !tf.space)
    throw InputError("verify: variant " + cfg.variant + " needs fields \"p\" and \"q\" in the tuple file");

  Margin mg = ddvv_margin(t, variant, tf.space);
  Json j = header("verify");
  j["variant"] = to_string(variant);
  j["n"] = t.n();
  j["m"] = t.m();
  j["p"] = tf.space ? Json(tf.space->p()) : Json(nullptr);
  j["q"] = tf.space ? Json(tf.space->q()) : Json(nullptr);
  j["tol"] = cfg.tol;
  j["lhs"] = mg.lhs;
  j["rhs"] = mg.rhs;
  j["margin"] = mg.margin;
  j["scale"] = mg.scale;
  j["normalized_margin"] = mg.scale > 0 ? Json(mg.normalized()) : Json(0.0);
  j["d"] = mg.d >= 0 ? Json(mg.d) : Json(nullptr);

  std::string status = "not_applicable";
  Json cert = nullptr;
  if (variant == Variant::qpq || variant == Variant::qn11) {
    try {
      auto c = variant == Variant::qpq ? certify_equality_qpq(t, *tf.space, cfg.tol) : certify_equality_qn11(t, cfg.tol);
      if (c) {
        status = "certified";
        cert = certificate_json(*c);
      } else {
        status = "none";
      }
    } catch (const InconclusiveError&) {
      status = "inconclusive";
    }
  }
  j["certificate_status"] = status;
  j["certificate"] = std::move(cert);

  if (!cfg.gram_csv.empty()) {
    if (t.m() < 2) throw InputError("verify: --gram-csv needs at least two matrices");
    io::write_text_file(cfg.gram_csv, io::matrix_csv(comm_gram(t).entries));
  }
  Outcome o{emit(j, cfg), {}};
  if (mg.scale > 0) check_margin(o, std::string(to_string(variant)) + " normalized margin", mg.normalized(), cfg.tol);
  return o;
}

inline Outcome cmd_search(const RunConfig& cfg) {
  QSpace space(cfg.p, cfg.q);
  SearchOptions opt;
  opt.restarts = cfg.restarts;
  opt.max_iters = cfg.iters;
  opt.seed = cfg.seed;
  opt.grad_tol = cfg.grad_tol;
  opt.record_trace = !cfg.trace.empty();
  if (cfg.iters < 1) throw InputError("search: --iters must be >= 1");
  auto res = maximize_ratio(space, cfg.m, opt);
  const double c = theoretical_constant(space, cfg.m);
  Json j = header("search");
  j["p"] = cfg.p;
  j["q"] = cfg.q;
  j["m"] = cfg.m;
  j["restarts"] = res.restarts;
  j["iters"] = cfg.iters;
  j["seed"] = res.seed;
  j["best_ratio"] = res.best_ratio;
  j["theoretical_constant"] = c;
  j["gap"] = c - res.best_ratio;
  j["converged"] = res.converged;
  j["iterations"] = res.iterations;
  j["best_restart"] = res.best_restart;
  j["argmax"] = io::tuple_to_json(res.argmax, space);
  if (!cfg.trace.empty()) {
    std::string csv = "iteration,objective\n";
    for (std::size_t k = 0; k < res.trace.size(); ++k) csv += std::to_string(k) + "," + io::format_double(res.trace[k]) + "\n";
    io::write_text_file(cfg.trace, csv);
  }
  Outcome o{emit(j, cfg), {}};
  check_margin(o, "search constant gap", c - res.best_ratio, cfg.tol);
  return o;
}

inline Json check_json(const SystemCheck& c) {
  Json j;
  j["symmetry"] = c.symmetry;
  j["involution"] = c.involution;
  j["anticommutation"] = c.anticommutation;
  return j;
}

inline Outcome cmd_clifford(const RunConfig& cfg) {
  std::vector<Matrix> mats;
  Json j = header("clifford");
  if (!cfg.input.empty()) {
    auto tf = io::read_tuple_file(cfg.input, cfg.symmetrize);
    if (tf.tuple.n() % 2 != 0) throw InputError("clifford: field \"n\" must be even for a system on R^{2l}");
    mats = tf.tuple.mats();
    j["source"] = "input";
  } else {
    mats = build_system(cfg.cm, cfg.l).mats();
    j["source"] = "built";
  }
  const int members = static_cast<int>(mats.size());
  const int l = static_cast<int>(mats.front().rows() / 2);
  j["m"] = members - 1;
  j["l"] = l;
  j["delta"] = members >= 2 ? Json(delta(members - 1)) : Json(nullptr);
  auto check = check_system(mats);
  j["check"] = check_json(check);
  j["valid"] = check.ok(cfg.tol);
  if (cfg.extend_check) {
    const bool ext = extendable(members, l);
    j["extendable"] = ext;
    if (ext) j["extension_check"] = check_json(check_system(build_system(members, l).mats()));
  }
  Json list = Json::array();
  for (const auto& p : mats) list.push_back(io::matrix_rows(p));
  j["matrices"] = std::move(list);
  return {emit(j, cfg), {}};
}

inline Outcome cmd_helicoid(const RunConfig& cfg) {
  HelicoidParams hp{cfg.s, cfg.n, cfg.lambda0, cfg.lambdas};
  auto rows = helicoid_equality_scan(hp, cfg.grid, cfg.lo, cfg.hi);
  Outcome o;
  if (cfg.format == "csv") {
    std::string csv;
    for (int i = 0; i < cfg.n; ++i) csv += "x" + std::to_string(i) + ",";
    csv += "rho,rho_perp,margin_qpq,margin_qn11\n";
    for (const auto& r : rows) {
      for (int i = 0; i < cfg.n; ++i) csv += io::format_double(r.point(i)) + ",";
      csv += io::format_double(r.report.rho) + "," + io::format_double(r.report.rho_perp) + "," +
             io::format_double(r.report.margin_qpq) + "," + io::format_double(r.report.margin_qn11) + "\n";
    }
    o.text = std::move(csv);
  } else {
    Json j = header("helicoid");
    Json list = Json::array();
    for (const auto& r : rows) {
      Json e;
      e["point"] = Json(std::vector<double>(r.point.data(), r.point.data() + r.point.size()));
      e["rho"] = r.report.rho;
      e["rho_perp"] = r.report.rho_perp;
      e["margin_qpq"] = r.report.margin_qpq;
      e["margin_qn11"] = r.report.margin_qn11;
      list.push_back(std::move(e));
    }
    j["rows"] = std::move(list);
    o.text = io::dump(j);
  }
  for (const auto& r : rows) {
    check_margin(o, "helicoid margin_qpq", r.report.margin_qpq, cfg.tol);
    check_margin(o, "helicoid margin_qn11", r.report.margin_qn11, cfg.tol);
  }
  return o;
}

inline Outcome cmd_report(const RunConfig& cfg) {
  auto tf = io::read_tuple_file(cfg.input, cfg.symmetrize);
  auto rep = curvature_report({tf.tuple, cfg.kappa}, cfg.tol);
  const bool in_space = tf.space && membership_qpq(tf.tuple, *tf.space, 1e-10);
  const bool sharp_qpq = in_space && !rep.out_of_hypothesis;
  const bool sharp_qn11 = sharp_qpq && std::min(tf.space->p(), tf.space->q()) == 1;
  Json j = header("report");
  j["n"] = tf.tuple.n();
  j["m"] = tf.tuple.m();
  j["kappa"] = cfg.kappa;
  j["rho"] = rep.rho;
  j["rho_perp"] = rep.rho_perp;
  j["mean_sq"] = rep.mean_sq;
  j["kappa_minus_rho"] = rep.kappa_minus_rho;
  j["S"] = rep.S;
  j["d"] = rep.d;
  j["margin_classic"] = rep.margin_classic;
  j["margin_qpq"] = rep.margin_qpq;
  j["margin_qn11"] = rep.margin_qn11;
  j["out_of_hypothesis"] = rep.out_of_hypothesis;
  j["margin_qpq_applies"] = sharp_qpq;
  j["margin_qn11_applies"] = sharp_qn11;
  Outcome o{emit(j, cfg), {}};
  check_margin(o, "margin_classic", rep.margin_classic, cfg.tol);
  if (sharp_qpq) check_margin(o, "margin_qpq", rep.margin_qpq, cfg.tol);
  if (sharp_qn11) check_margin(o, "margin_qn11", rep.margin_qn11, cfg.tol);
  return o;
}

// Exact integer checks of the basis commutator structure, the δ table, the
// compound identity and the Clifford generators.
inline std::vector<std::pair<std::string, bool>> selftest_checks() {
  using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<std::pair<std::string, bool>> out;

  bool pattern = true, contraction = true;
  for (int p = 1; p <= 5; ++p)
    for (int q = 1; q <= 5; ++q) {
      QSpace sp(p, q);
      const int nn = sp.dim();
      std::vector<IMat> u;
      for (int a = 0; a < nn; ++a) u.push_back(sp.unscaled_basis_element<long long>(a));
      std::vector<std::vector<IMat>> comm(nn, std::vector<IMat>(nn));
      for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b) comm[a][b] = u[a] * u[b] - u[b] * u[a];
      for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b) {
          auto [i, j] = sp.entry(a);
          auto [k, l] = sp.entry(b);
          const long long expect = ((i == k) != (j == l)) ? 2 : 0;
          if (comm[a][b].cwiseProduct(comm[a][b]).sum() != expect) pattern = false;
          long long s = 0;
          for (int c = 0; c < nn; ++c) s += comm[a][c].cwiseProduct(comm[b][c]).sum();
          if (s != (a == b ? 2LL * (sp.n() - 2) : 0)) contraction = false;
        }
    }
  out.emplace_back("basis_commutator_pattern", pattern);
  out.emplace_back("basis_commutator_contraction", contraction);

  const long long table[] = {1, 2, 4, 4, 8, 8, 8, 8};
  bool dtab = true;
  for (int m = 1; m <= 8; ++m) dtab = dtab && delta(m) == table[m - 1];
  for (int m = 1; m <= 16; ++m) dtab = dtab && delta(m + 8) == 16 * delta(m);
  out.emplace_back("delta_table", dtab);

  bool ident = true;
  for (int n = 2; n <= 10; ++n) {
    Matrix f = phi(Matrix::Identity(n, n));
    ident = ident && (f.array() == Matrix::Identity(f.rows(), f.cols()).array()).all();
  }
  out.emplace_back("compound_identity", ident);

  bool cliff = true;
  for (int m = 0; m <= 10; ++m) {
    const int l = m == 0 ? 1 : static_cast<int>(delta(m));
    cliff = cliff && check_system(build_system(m, l).mats()).worst() == 0.0;
  }
  out.emplace_back("clifford_generators_exact", cliff);

  MatTuple c12({c1_matrix(), c2_matrix()});
  Margin mg = ddvv_margin(c12, Variant::qpq, QSpace(2, 2));
  out.emplace_back("canonical_pair_equality", mg.lhs == 32.0 && mg.rhs == 32.0);
  return out;
}

inline Outcome cmd_selftest(const RunConfig& cfg) {
  Json j = header("selftest");
  Json checks = Json::array();
  bool all = true;
  Outcome o;
  for (auto& [name, ok] : selftest_checks()) {
    Json c;
    c["name"] = name;
    c["passed"] = ok;
    checks.push_back(std::move(c));
    if (!ok) {
      all = false;
      o.violations.push_back("selftest " + name);
    }
  }
  j["passed"] = all;
  j["checks"] = std::move(checks);
  o.text = emit(j, cfg);
  return o;
}

}  // namespace detail

/// Runs one subcommand on a validated configuration.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!(cfg.tol > 0)) throw InputError("--tol must be positive");
    if (cfg.format != "json" && cfg.format != "csv") throw InputError("--format must be json or csv");
    Outcome o;
    const auto& c = cfg.subcommand;
    if (c == "verify")
      o = detail::cmd_verify(cfg);
    else if (c == "search")
      o = detail::cmd_search(cfg);
    else if (c == "clifford")
      o = detail::cmd_clifford(cfg);
    else if (c == "helicoid")
      o = detail::cmd_helicoid(cfg);
    else if (c == "report")
      o = detail::cmd_report(cfg);
    else if (c == "selftest")
      o = detail::cmd_selftest(cfg);
    else
      throw InputError("unknown subcommand: " + c);
    if (cfg.output.empty())
      out << o.text;
    else
      io::write_text_file(cfg.output, o.text);
    if (!o.violations.empty()) {
      for (const auto& v : o.violations) err << "VIOLATION: " << v << '\n';
      return kExitViolation;
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DegenerateError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
}

/// Parses argv-style arguments (without the program name) and runs.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Bounds, equality cases and examples for commutator inequalities on austere matrix spaces",
               "austere_lab"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Tolerance");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--output,-o", cfg.output, "Write the result here instead of stdout");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* verify = app.add_subcommand("verify", "Evaluate an inequality on a tuple file and certify equality");
  common(verify);
  verify->add_option("--input,-i", cfg.input, "Tuple JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--variant", cfg.variant, "classic | qpq | qn11 | bw")
      ->check(CLI::IsMember({"classic", "qpq", "qn11", "bw", "bw_pair"}));
  verify->add_flag("--symmetrize", cfg.symmetrize, "Symmetrize slightly asymmetric input");
  verify->add_option("--gram-csv", cfg.gram_csv, "Write the commutator Gram matrix as CSV");

  auto* search = app.add_subcommand("search", "Maximize the commutator ratio over Q(p,q)");
  common(search);
  search->add_option("--p", cfg.p)->check(CLI::PositiveNumber);
  search->add_option("--q", cfg.q)->check(CLI::PositiveNumber);
  search->add_option("--m", cfg.m)->check(CLI::PositiveNumber);
  search->add_option("--restarts", cfg.restarts)->check(CLI::PositiveNumber);
  search->add_option("--iters", cfg.iters)->check(CLI::PositiveNumber);
  search->add_option("--grad-tol", cfg.grad_tol)->check(CLI::PositiveNumber);
  search->add_option("--trace", cfg.trace, "Write objective per iteration as CSV");

  auto* cliff = app.add_subcommand("clifford", "Build or verify a Clifford system");
  common(cliff);
  cliff->add_option("--m", cfg.cm, "Index of the last member P_m")->check(CLI::NonNegativeNumber);
  cliff->add_option("--l", cfg.l, "Half dimension")->check(CLI::PositiveNumber);
  cliff->add_option("--input,-i", cfg.input, "Verify the matrices of a tuple file instead")->check(CLI::ExistingFile);
  cliff->add_flag("--extend-check", cfg.extend_check, "Report whether one more member exists");
  cliff->add_flag("--symmetrize", cfg.symmetrize);

  auto* heli = app.add_subcommand("helicoid", "Scan curvature margins of a generalized helicoid");
  common(heli);
  heli->add_option("--s", cfg.s);
  heli->add_option("--n", cfg.n);
  heli->add_option("--lambda0", cfg.lambda0);
  heli->add_option("--lambdas", cfg.lambdas)->delimiter(',');
  heli->add_option("--grid", cfg.grid)->check(CLI::PositiveNumber);
  heli->add_option("--lo", cfg.lo);
  heli->add_option("--hi", cfg.hi);

  auto* report = app.add_subcommand("report", "Curvature report of a shape-operator tuple");
  common(report);
  report->add_option("--input,-i", cfg.input, "Tuple JSON")->required()->check(CLI::ExistingFile);
  report->add_option("--kappa", cfg.kappa, "Ambient curvature");
  report->add_flag("--symmetrize", cfg.symmetrize);

  auto* self = app.add_subcommand("selftest", "Exact structural checks");
  common(self);

  bool helicoid_csv_default = true;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    helicoid_csv_default = heli->count("--format") == 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  if (cfg.subcommand == "helicoid" && helicoid_csv_default) cfg.format = "csv";
  return run(cfg, out, err);
}

}  // namespace austere::app
