#pragma once

#include "hermlie/presets.hpp"

#include <json.hpp>

#include <cstdio>

namespace hermlie {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // normalizes -0
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in JSON output");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline void escape_string(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

inline bool array_is_flat(const ordered_json& j) {
  for (const auto& e : j)
    if (e.is_object() || e.is_array()) return false;
  return true;
}

inline void dump_value(const ordered_json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::detail::value_t::null: out += "null"; break;
    case nlohmann::detail::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case nlohmann::detail::value_t::number_float: out += format_number(j.get<double>()); break;
    case nlohmann::detail::value_t::string: escape_string(j.get<std::string>(), out); break;
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      if (array_is_flat(j)) {
        out.push_back('[');
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_value(e, indent, out);
        }
        out.push_back(']');
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_value(e, indent + 1, out);
      }
      out += "\n" + pad + "]";
      break;
    }
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        escape_string(it.key(), out);
        out += ": ";
        dump_value(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      break;
    }
    default: throw std::invalid_argument("unsupported JSON value type");
  }
}

}  // namespace detail

/// Deterministic serializer: insertion-ordered keys, 17 significant digits,
/// no negative zero. Output parses back to a document that serializes to the
/// same bytes.
inline std::string dump_json(const ordered_json& j) {
  std::string out;
  detail::dump_value(j, 0, out);
  return out;
}

inline ordered_json vector_to_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline ordered_json matrix_to_json(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

/// Antisymmetric 4 x 4 matrix as a basis-coefficient object. All six keys
/// are always present so documents diff cleanly.
inline ordered_json two_form_to_json(const Mat& m) {
  if (m.rows() != 4 || m.cols() != 4)
    throw std::invalid_argument("two-form serialization expects dimension 4");
  ordered_json o;
  o["e12"] = m(0, 1);
  o["e13"] = m(0, 2);
  o["e14"] = m(0, 3);
  o["e23"] = m(1, 2);
  o["e24"] = m(1, 3);
  o["e34"] = m(2, 3);
  return o;
}

inline Mat two_form_from_json(const ordered_json& o) {
  if (!o.is_object()) throw std::invalid_argument("two-form document must be an object");
  Mat m = Mat::Zero(4, 4);
  const std::pair<const char*, std::pair<int, int>> keys[6] = {
      {"e12", {0, 1}}, {"e13", {0, 2}}, {"e14", {0, 3}},
      {"e23", {1, 2}}, {"e24", {1, 3}}, {"e34", {2, 3}}};
  for (const auto& k : keys) {
    if (!o.contains(k.first)) continue;
    const double v = o.at(k.first).get<double>();
    m(k.second.first, k.second.second) = v;
    m(k.second.second, k.second.first) = -v;
  }
  return m;
}

inline ordered_json algebra_to_json(const LieAlgebraStructure& L) {
  ordered_json doc;
  doc["dim"] = L.dim;
  ordered_json brackets = ordered_json::array();
  for (int i = 0; i < L.dim; ++i)
    for (int j = i + 1; j < L.dim; ++j) {
      ordered_json out_obj = ordered_json::object();
      for (int k = 0; k < L.dim; ++k)
        if (L.c(i, j, k) != 0.0) out_obj[std::to_string(k + 1)] = L.c(i, j, k);
      if (!out_obj.empty()) {
        ordered_json e;
        e["i"] = i + 1;
        e["j"] = j + 1;
        e["out"] = out_obj;
        brackets.push_back(e);
      }
    }
  doc["brackets"] = brackets;
  return doc;
}

inline LieAlgebraStructure algebra_from_json(const ordered_json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.at("dim").is_number_integer())
    throw std::invalid_argument("algebra document needs an integer \"dim\"");
  const int dim = doc.at("dim").get<int>();
  if (dim < 1 || dim > 16) throw std::invalid_argument("algebra dimension out of range");
  std::vector<BracketEntry> entries;
  if (doc.contains("brackets")) {
    const auto& bs = doc.at("brackets");
    if (!bs.is_array()) throw std::invalid_argument("\"brackets\" must be an array");
    for (const auto& b : bs) {
      if (!b.is_object() || !b.contains("i") || !b.contains("j") || !b.contains("out"))
        throw std::invalid_argument("bracket entries need \"i\", \"j\" and \"out\"");
      BracketEntry e;
      e.i = b.at("i").get<int>();
      e.j = b.at("j").get<int>();
      const auto& out_obj = b.at("out");
      if (!out_obj.is_object()) throw std::invalid_argument("bracket \"out\" must be an object");
      for (auto it = out_obj.begin(); it != out_obj.end(); ++it) {
        int k = 0;
        try {
          k = std::stoi(it.key());
        } catch (const std::exception&) {
          throw std::invalid_argument("bracket output key is not an index: " + it.key());
        }
        e.out.emplace_back(k, it.value().get<double>());
      }
      entries.push_back(std::move(e));
    }
  }
  return LieAlgebraStructure::from_brackets(dim, entries);
}

inline Mat matrix_from_json(const ordered_json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument(std::string(what) + " must be a non-empty array of rows");
  const int n = static_cast<int>(rows.size());
  Mat m(n, static_cast<int>(rows.at(0).size()));
  for (int i = 0; i < n; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != m.cols())
      throw std::invalid_argument(std::string(what) + " rows must have equal length");
    for (int j = 0; j < m.cols(); ++j)
      m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

struct StructureDocument {
  LieAlgebraStructure algebra;
  Mat g;
  Mat J;
};

inline ordered_json structure_to_json(const LieAlgebraStructure& L, const Mat& g, const Mat& J) {
  ordered_json doc = algebra_to_json(L);
  doc["metric"] = matrix_to_json(g);
  doc["J"] = matrix_to_json(J);
  return doc;
}

inline ordered_json structure_to_json(const AlmostHermitianStructure& S) {
  return structure_to_json(S.algebra, S.g, S.J);
}

inline StructureDocument structure_from_json(const ordered_json& doc) {
  StructureDocument s{algebra_from_json(doc), Mat(), Mat()};
  if (!doc.contains("metric") || !doc.contains("J"))
    throw std::invalid_argument("structure document needs \"metric\" and \"J\"");
  s.g = matrix_from_json(doc.at("metric"), "\"metric\"");
  s.J = matrix_from_json(doc.at("J"), "\"J\"");
  if (s.g.rows() != s.algebra.dim || s.g.cols() != s.algebra.dim || s.J.rows() != s.algebra.dim ||
      s.J.cols() != s.algebra.dim)
    throw std::invalid_argument("\"metric\" and \"J\" must match the algebra dimension");
  return s;
}

inline ordered_json flags_to_json(const ConditionFlags& f) {
  ordered_json o;
  auto put = [&o](const char* name, const FlagEntry& e) {
    ordered_json fe;
    fe["holds"] = e.holds;
    fe["residual"] = e.residual;
    o[name] = fe;
  };
  put("lcs", f.lcs);
  put("gauduchon", f.gauduchon);
  put("almost_kaehler", f.almost_kaehler);
  put("integrable", f.integrable);
  put("lee_parallel", f.lee_parallel);
  put("lee_killing", f.lee_killing);
  put("sym_j_minus_vanishes", f.sym_j_minus_vanishes);
  put("n_theta_vanishes", f.n_theta_vanishes);
  put("j_invariant_rho_chern", f.j_invariant_rho_chern);
  put("j_invariant_rwf", f.j_invariant_rwf);
  return o;
}

inline ordered_json einstein_to_json(const EinsteinReport& e) {
  ordered_json o;
  o["second_chern_residual"] = e.second_chern_residual;
  o["bismut_residual"] = e.bismut_residual;
  o["weyl_residual"] = e.weyl_residual;
  o["lambda_second_chern"] = e.lambda_second_chern;
  o["lambda_bismut"] = e.lambda_bismut;
  o["weyl_hypotheses_hold"] = e.weyl_hypotheses_hold;
  return o;
}

/// Full curvature and flag report for one structure.
inline ordered_json report_document(const std::string& source, const AlmostHermitianStructure& S) {
  const GeometryContext C = make_context(S);
  const CurvatureReport rep = curvature_report(C);
  ordered_json doc;
  doc["source"] = source;
  doc["dim"] = S.algebra.dim;
  doc["theta"] = vector_to_json(C.theta);
  doc["lee_residual"] = S.lee.residual;
  doc["nijenhuis_norm_sq"] = C.norm_n_sq;
  ordered_json curv;
  curv["rho_chern"] = two_form_to_json(rep.rho_chern);
  curv["r_second_chern"] = two_form_to_json(rep.r_second_chern);
  curv["ric_bismut"] = two_form_to_json(rep.ric_bismut);
  curv["rwf"] = two_form_to_json(rep.rwf);
  curv["nijenhuis_factor"] = two_form_to_json(rep.nijenhuis_factor);
  curv["ric_weyl"] = matrix_to_json(rep.ric_weyl);
  curv["ric_weyl_tilde"] = matrix_to_json(rep.ric_weyl_tilde);
  curv["ric_riemann"] = matrix_to_json(rep.ric_riemann);
  curv["rho_star"] = matrix_to_json(rep.rho_star);
  ordered_json scal;
  scal["s_H"] = rep.scalars.s_H;
  scal["s_g"] = rep.scalars.s_g;
  scal["s_W"] = rep.scalars.s_W;
  scal["s_star"] = rep.scalars.s_star;
  curv["scalars"] = scal;
  doc["curvature"] = curv;
  doc["flags"] = flags_to_json(condition_flags(C));
  doc["einstein"] = einstein_to_json(einstein_residuals(C));
  return doc;
}

inline ordered_json identity_results_to_json(const std::vector<IdentityResult>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["id"] = r.id;
    o["residual"] = r.residual;
    o["skipped"] = r.skipped;
    ordered_json hyp = ordered_json::array();
    for (const auto& h : r.hypotheses) hyp.push_back(h);
    o["hypotheses"] = hyp;
    arr.push_back(o);
  }
  return arr;
}

/// Identity-suite verdict for one structure at a given tolerance.
inline ordered_json verify_document(const std::string& source, const AlmostHermitianStructure& S,
                                    const std::vector<std::string>& selection, double tolerance) {
  const auto rows = run_identity_suite(S, selection);
  ordered_json doc;
  doc["source"] = source;
  doc["tolerance"] = tolerance;
  doc["identities"] = identity_results_to_json(rows);
  ordered_json failures = ordered_json::array();
  for (const auto& r : rows)
    if (!r.skipped && !(r.residual <= tolerance)) failures.push_back(r.id);
  doc["failures"] = failures;
  doc["passed"] = failures.empty();
  return doc;
}

inline ordered_json witness_to_json(const AlmostAbelianData& d) {
  ordered_json o;
  o["a"] = d.a;
  o["b"] = vector_to_json(d.b);
  o["v"] = vector_to_json(d.v);
  o["A"] = matrix_to_json(d.A);
  return o;
}

inline ordered_json families_to_json(const std::vector<SolutionFamily>& fams) {
  ordered_json arr = ordered_json::array();
  for (const auto& f : fams) {
    ordered_json o;
    o["description"] = f.description;
    o["witness"] = witness_to_json(f.witness);
    o["class"] = to_string(f.class_label);
    ordered_json flags;
    flags["almost_kaehler"] = f.almost_kaehler;
    flags["lee_nonzero"] = f.lee_nonzero;
    flags["integrable"] = f.integrable;
    o["flags"] = flags;
    o["einstein_residual"] = f.einstein_residual;
    o["lambda"] = f.lambda;
    arr.push_back(o);
  }
  return arr;
}

}  // namespace hermlie
