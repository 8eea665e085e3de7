#pragma once

// Tuple files and deterministic JSON / CSV emission.
//
// Tuple schema: {"n": int, "m": int, "p": int|null, "q": int|null,
//                "matrices": [[row-major floats], ...]}

#include <austere/matspace.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace austere::io {

using Json = nlohmann::ordered_json;

/// %.17g, with non-finite values mapped to null.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump(const Json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return !e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(e, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Fixed field order (insertion order) and 17 significant digits for floats.
inline std::string dump(const Json& j) {
  std::string out;
  detail::dump(j, out, 2, 0);
  out += '\n';
  return out;
}

inline Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct TupleFile {
  MatTuple tuple;
  std::optional<QSpace> space;
};

inline Json tuple_to_json(const MatTuple& t, const std::optional<QSpace>& space = std::nullopt) {
  Json j;
  j["n"] = t.n();
  j["m"] = t.m();
  j["p"] = space ? Json(space->p()) : Json(nullptr);
  j["q"] = space ? Json(space->q()) : Json(nullptr);
  Json mats = Json::array();
  for (const auto& a : t) {
    Json flat = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index k = 0; k < a.cols(); ++k) flat.push_back(a(i, k));
    mats.push_back(std::move(flat));
  }
  j["matrices"] = std::move(mats);
  return j;
}

namespace detail {

inline int positive_int(const Json& j, const char* field) {
  if (!j.contains(field)) throw InputError(std::string("tuple file: missing field \"") + field + "\"");
  const Json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw InputError(std::string("tuple file: field \"") + field + "\" must be a positive integer");
  return v.get<int>();
}

inline std::optional<int> optional_int(const Json& j, const char* field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  const Json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw InputError(std::string("tuple file: field \"") + field + "\" must be a positive integer or null");
  return v.get<int>();
}

}  // namespace detail

/// Parses and validates a tuple document. Members more asymmetric than
/// 1e-12 are rejected unless `symmetrize` is set.
inline TupleFile tuple_from_json(const Json& j, bool symmetrize = false) {
  if (!j.is_object()) throw InputError("tuple file: top level must be an object");
  const int n = detail::positive_int(j, "n");
  const int m = detail::positive_int(j, "m");
  auto p = detail::optional_int(j, "p");
  auto q = detail::optional_int(j, "q");
  if (p.has_value() != q.has_value()) throw InputError("tuple file: fields \"p\" and \"q\" must both be set or both null");
  if (p && *p + *q != n) throw InputError("tuple file: field \"p\" + \"q\" must equal \"n\"");
  if (!j.contains("matrices") || !j.at("matrices").is_array())
    throw InputError("tuple file: field \"matrices\" must be an array");
  const Json& mats = j.at("matrices");
  if (static_cast<int>(mats.size()) != m)
    throw InputError("tuple file: field \"matrices\" has " + std::to_string(mats.size()) + " entries, \"m\" says " +
                     std::to_string(m));
  std::vector<Matrix> out;
  for (int r = 0; r < m; ++r) {
    const Json& flat = mats[r];
    const std::string field = "matrices[" + std::to_string(r) + "]";
    if (!flat.is_array() || static_cast<long long>(flat.size()) != 1LL * n * n)
      throw InputError("tuple file: field \"" + field + "\" must hold n*n numbers");
    Matrix a(n, n);
    for (int k = 0; k < n * n; ++k) {
      if (!flat[k].is_number()) throw InputError("tuple file: field \"" + field + "\" contains a non-number");
      a(k / n, k % n) = flat[k].get<double>();
      if (!std::isfinite(a(k / n, k % n))) throw InputError("tuple file: field \"" + field + "\" is not finite");
    }
    if (symmetrize) {
      a = SymMat::symmetrized(a).matrix();
    } else if (max_abs(a - a.transpose()) > 1e-12) {
      throw InputError("tuple file: field \"" + field + "\" is not symmetric (use --symmetrize)");
    }
    out.push_back(std::move(a));
  }
  TupleFile tf{MatTuple(std::move(out)), std::nullopt};
  if (p) tf.space = QSpace(*p, *q);
  return tf;
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(origin + ": malformed JSON: " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TupleFile read_tuple_file(const std::string& path, bool symmetrize = false) {
  return tuple_from_json(parse_json_text(read_text_file(path), path), symmetrize);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path);
  out << text;
}

/// Matrix as CSV, one row per line, 17 significant digits.
inline std::string matrix_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace austere::io
