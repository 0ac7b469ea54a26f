#pragma once

// JSON reading and writing for every public type.  Rationals are strings
// "p/q" (or "p"); integers are JSON numbers when they fit in 64 bits.

#include <cmath>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hbl/datum.hpp"
#include "hbl/decision.hpp"
#include "hbl/diophantine.hpp"
#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/oracle.hpp"
#include "hbl/polytope.hpp"
#include "hbl/rational.hpp"

namespace hbl::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return r.get_str(); }

inline Json to_json(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

inline Json to_json(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

inline Integer integer_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    const Rational r = rational_from_json(j, where);
    if (is_integer(r)) return r.get_num();
  }
  throw ParseError(where + ": expected an integer");
}

inline std::size_t count_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ParseError(where + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline Json parse_json(std::istream& in, const std::string& source) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

// --- matrices, data, subspaces ---------------------------------------------

inline Json rows_to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (const auto& v : m.row(i)) row.push_back(is_integer(v) ? to_json(v.get_num()) : to_json(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RationalMatrix rows_from_json(const Json& rows, std::size_t cols, const std::string& where,
                                     bool integral) {
  if (!rows.is_array()) throw ParseError(where + ": rows must be an array");
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = where + ".rows[" + std::to_string(i) + "]";
    if (!rows[i].is_array()) throw ParseError(at + ": expected an array");
    if (rows[i].size() != cols) {
      throw AmbientMismatch(at + ": has " + std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(cols));
    }
    std::vector<Rational> row;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string cell = at + "[" + std::to_string(c) + "]";
      row.push_back(integral ? Rational(integer_from_json(rows[i][c], cell)) : rational_from_json(rows[i][c], cell));
    }
    out.push_back(std::move(row));
  }
  return RationalMatrix::from_rows(out, cols);
}

inline Json to_json(const HblDatum& d) {
  Json out;
  out["ambient_dim"] = d.ambient_dim();
  Json maps = Json::array();
  for (const auto& m : d.maps()) maps.push_back(Json{{"rows", rows_to_json(m)}});
  out["maps"] = std::move(maps);
  return out;
}

/// Reads a datum; entries must be integers.
inline HblDatum datum_from_json(const Json& j) {
  const std::size_t d = count_from_json(field(j, "ambient_dim", "datum"), "datum.ambient_dim");
  const Json& maps = field(j, "maps", "datum");
  if (!maps.is_array()) throw ParseError("datum.maps: expected an array");
  std::vector<RationalMatrix> out;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const std::string where = "datum.maps[" + std::to_string(k) + "]";
    out.push_back(rows_from_json(field(maps[k], "rows", where), d, where, true));
  }
  return HblDatum(d, std::move(out));
}

inline Json to_json(const Subspace& w) {
  Json basis = Json::array();
  for (std::size_t i = 0; i < w.dim(); ++i) basis.push_back(to_json(w.basis().row(i)));
  return Json{{"ambient_dim", w.ambient_dim()}, {"basis", std::move(basis)}};
}

/// Reads any spanning set and returns the canonical subspace it spans.
inline Subspace subspace_from_json(const Json& j) {
  const std::size_t d = count_from_json(field(j, "ambient_dim", "subspace"), "subspace.ambient_dim");
  const Json& basis = field(j, "basis", "subspace");
  return Subspace::span(rows_from_json(basis, d, "subspace.basis", false));
}

// --- polytopes and decision results ---------------------------------------

inline Json inequalities_to_json(const Polytope& p) {
  Json out = Json::array();
  for (const auto& ineq : p.inequalities()) {
    Json coeffs = Json::array();
    for (const auto& c : ineq.coeffs) coeffs.push_back(to_json(c));
    out.push_back(Json{{"coeffs", std::move(coeffs)},
                       {"rhs", to_json(ineq.rhs)},
                       {"witness", ineq.witness ? to_json(*ineq.witness) : Json(nullptr)}});
  }
  return out;
}

inline Json vertices_to_json(const std::vector<Vertex>& vertices) {
  Json out = Json::array();
  for (const auto& v : vertices) out.push_back(to_json(v.point));
  return out;
}

inline Json to_json(const Polytope& p) {
  return Json{{"m", p.dim()},
              {"inequalities", inequalities_to_json(p)},
              {"vertices", vertices_to_json(extreme_points(p))}};
}

inline Polytope polytope_from_json(const Json& j) {
  const std::size_t m = count_from_json(field(j, "m", "polytope"), "polytope.m");
  Polytope p(m);
  const Json& list = field(j, "inequalities", "polytope");
  if (!list.is_array()) throw ParseError("polytope.inequalities: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "polytope.inequalities[" + std::to_string(i) + "]";
    Inequality ineq;
    const Json& coeffs = field(list[i], "coeffs", where);
    if (!coeffs.is_array()) throw ParseError(where + ".coeffs: expected an array");
    for (const auto& c : coeffs) ineq.coeffs.push_back(integer_from_json(c, where + ".coeffs"));
    ineq.rhs = integer_from_json(field(list[i], "rhs", where), where + ".rhs");
    if (auto w = list[i].find("witness"); w != list[i].end() && !w->is_null()) ineq.witness = subspace_from_json(*w);
    p.add(std::move(ineq));
  }
  return p;
}

inline std::string kind_name(const TraceNode& n) {
  switch (n.kind) {
    case TraceNode::Kind::ambient0: return "ambient0";
    case TraceNode::Kind::base_m1: return "base_m1";
    case TraceNode::Kind::one: return "one(" + std::to_string(n.index + 1) + ")";
    case TraceNode::Kind::zero: return "zero(" + std::to_string(n.index + 1) + ")";
    case TraceNode::Kind::split: return "split";
    case TraceNode::Kind::refuted: return "refuted";
    case TraceNode::Kind::contained: return "contained";
  }
  return "?";
}

inline Json to_json(const TraceNode& n) {
  Json out{{"kind", kind_name(n)}, {"s", to_json(n.s)}, {"verdict", n.verdict}};
  if (n.witness) out["witness"] = to_json(*n.witness);
  if (!n.children.empty()) {
    Json children = Json::array();
    for (const auto& c : n.children) children.push_back(to_json(c));
    out["children"] = std::move(children);
  }
  return out;
}

inline Json to_json(const PolytopeResult& r) {
  Json out{{"m", r.polytope.dim()},
           {"inequalities", inequalities_to_json(r.polytope)},
           {"vertices", vertices_to_json(r.vertices)},
           {"steps_used", r.steps_used}};
  Json traces = Json::array();
  for (const auto& t : r.traces) traces.push_back(to_json(t));
  out["traces"] = std::move(traces);
  return out;
}

// --- oracle --------------------------------------------------------------

inline Json to_json(const PointSet& e) {
  Json out = Json::array();
  for (const auto& p : e.points()) out.push_back(p);
  return out;
}

inline PointSet point_set_from_json(const Json& j, std::size_t d) {
  if (!j.is_array()) throw ParseError("point set: expected an array of integer arrays");
  std::vector<Point> pts;
  for (const auto& p : j) {
    if (!p.is_array()) throw ParseError("point set: expected an array of integer arrays");
    Point x;
    for (const auto& v : p) {
      if (!v.is_number_integer()) throw ParseError("point set: coordinates must be integers");
      x.push_back(v.get<std::int64_t>());
    }
    pts.push_back(std::move(x));
  }
  return PointSet(d, std::move(pts));
}

inline Json to_json(const VerifyReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    Json item{{"trial", v.trial}};
    if (!v.points.empty()) item["points"] = to_json(v.points);
    violations.push_back(std::move(item));
  }
  return Json{{"trials", r.trials},
              {"violations", std::move(violations)},
              {"worst_ratio_log", std::isfinite(r.worst_ratio_log) ? Json(r.worst_ratio_log) : Json(nullptr)}};
}

// --- polynomial systems and encodings -------------------------------------

inline Json to_json(const PolySystem& s) {
  Json polys = Json::array();
  for (const auto& f : s.polys) {
    Json terms = Json::array();
    for (const auto& [e, c] : f.terms()) terms.push_back(Json{{"exps", e}, {"coeff", to_json(c)}});
    polys.push_back(Json{{"terms", std::move(terms)}});
  }
  return Json{{"q", s.q}, {"polys", std::move(polys)}};
}

inline PolySystem poly_system_from_json(const Json& j) {
  PolySystem s;
  s.q = count_from_json(field(j, "q", "system"), "system.q");
  const Json& polys = field(j, "polys", "system");
  if (!polys.is_array()) throw ParseError("system.polys: expected an array");
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const std::string where = "system.polys[" + std::to_string(k) + "]";
    Polynomial f(s.q);
    const Json& terms = field(polys[k], "terms", where);
    if (!terms.is_array()) throw ParseError(where + ".terms: expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string at = where + ".terms[" + std::to_string(t) + "]";
      const Json& exps = field(terms[t], "exps", at);
      if (!exps.is_array() || exps.size() != s.q) {
        throw ParseError(at + ".exps: expected " + std::to_string(s.q) + " exponents");
      }
      Exponents e;
      for (const auto& x : exps) e.push_back(static_cast<unsigned>(count_from_json(x, at + ".exps")));
      f.add_term(std::move(e), rational_from_json(field(terms[t], "coeff", at), at + ".coeff"));
    }
    if (f.is_zero()) throw ParseError(where + ": zero polynomial");
    s.polys.push_back(std::move(f));
  }
  return s;
}

inline Json to_json(const BasicSystem& b) {
  Json affine = Json::array();
  for (const auto& a : b.affine) {
    Json coeffs = Json::array();
    for (const auto& [i, c] : a.coeffs) coeffs.push_back(Json::array({i, to_json(c)}));
    affine.push_back(Json{{"constant", to_json(a.constant)}, {"coeffs", std::move(coeffs)}});
  }
  Json mults = Json::array();
  for (const auto& m : b.mults) mults.push_back(Json::array({m.alpha, m.beta, m.gamma}));
  return Json{{"num_vars", b.num_vars},
              {"monomials", b.monomials},
              {"projection", b.projection},
              {"affine", std::move(affine)},
              {"mults", std::move(mults)}};
}

inline BasicSystem basic_system_from_json(const Json& j) {
  BasicSystem b;
  b.num_vars = count_from_json(field(j, "num_vars", "basic system"), "basic system.num_vars");
  auto index = [&](const Json& x, const std::string& where) {
    const std::size_t i = count_from_json(x, where);
    if (i >= b.num_vars) throw ParseError(where + ": variable index out of range");
    return i;
  };
  if (auto it = j.find("monomials"); it != j.end()) b.monomials = it->get<std::vector<Exponents>>();
  for (const auto& p : field(j, "projection", "basic system")) b.projection.push_back(index(p, "basic system.projection"));
  for (const auto& a : field(j, "affine", "basic system")) {
    AffineRelation rel;
    rel.constant = integer_from_json(field(a, "constant", "affine"), "affine.constant");
    for (const auto& c : field(a, "coeffs", "affine")) {
      if (!c.is_array() || c.size() != 2) throw ParseError("affine.coeffs: expected [index, coefficient] pairs");
      rel.coeffs.emplace_back(index(c[0], "affine.coeffs"), integer_from_json(c[1], "affine.coeffs"));
    }
    b.affine.push_back(std::move(rel));
  }
  for (const auto& m : field(j, "mults", "basic system")) {
    if (!m.is_array() || m.size() != 3) throw ParseError("mults: expected [alpha, beta, gamma] triples");
    b.mults.push_back({index(m[0], "mults"), index(m[1], "mults"), index(m[2], "mults")});
  }
  return b;
}

inline Json to_json(const DiophEncoding& e) {
  Json maps = Json::array();
  for (const auto& m : e.maps) maps.push_back(Json{{"rows", rows_to_json(m)}});
  return Json{{"mu", e.mu},
              {"nu", e.nu},
              {"rho", e.rho},
              {"rho_list", e.rho_list},
              {"a", to_json(e.a)},
              {"query", e.query},
              {"maps", std::move(maps)},
              {"system", to_json(e.system)}};
}

/// Rebuilds an encoding from its system and query; the stored matrices must
/// match the rebuilt ones.
inline DiophEncoding encoding_from_json(const Json& j) {
  const BasicSystem b = basic_system_from_json(field(j, "system", "encoding"));
  std::vector<Rational> a;
  for (const auto& x : field(j, "a", "encoding")) a.push_back(rational_from_json(x, "encoding.a"));
  DiophEncoding e = encode(b, a.size(), a);
  if (auto it = j.find("maps"); it != j.end()) {
    if (!it->is_array() || it->size() != e.maps.size()) throw ParseError("encoding.maps: wrong number of maps");
    for (std::size_t i = 0; i < e.maps.size(); ++i) {
      const auto m = rows_from_json(field((*it)[i], "rows", "encoding.maps"), e.nu, "encoding.maps", true);
      if (!(m == e.maps[i])) throw ParseError("encoding.maps[" + std::to_string(i) + "] does not match the system");
    }
  }
  return e;
}

}  // namespace hbl::io
