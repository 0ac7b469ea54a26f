#pragma once

// Exact H-representation polytopes inside the unit cube [0,1]^m.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/rational.hpp"

namespace hbl {

/// sum_j coeffs[j] * s_j >= rhs.  When present, the witness W reproduces
/// the inequality: rank_tuple(D, W) = (rhs; coeffs).
struct Inequality {
  std::vector<Integer> coeffs;
  Integer rhs;
  std::optional<Subspace> witness;

  bool same_constraint(const Inequality& other) const {
    return coeffs == other.coeffs && rhs == other.rhs;
  }

  Rational lhs(std::span<const Rational> s) const {
    Rational total = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      if (sgn(coeffs[j]) != 0) total += s[j] * coeffs[j];
    return total;
  }

  bool holds(std::span<const Rational> s) const { return lhs(s) >= rhs; }
  bool tight(std::span<const Rational> s) const { return lhs(s) == rhs; }
};

/// Identifies one constraint of the enlarged family used for vertices:
/// a stored inequality, a lower bound s_j >= 0, or an upper bound s_j <= 1.
struct ConstraintRef {
  enum class Kind { inequality, lower, upper };
  Kind kind = Kind::inequality;
  std::size_t index = 0;

  friend auto operator<=>(const ConstraintRef&, const ConstraintRef&) = default;
};

struct Vertex {
  std::vector<Rational> point;
  std::vector<ConstraintRef> active;  ///< every constraint tight at `point`
};

/// The set of s in [0,1]^m satisfying every stored inequality.  The box is
/// implicit.  Redundant inequalities are allowed; syntactic duplicates are
/// not stored twice.
class Polytope {
 public:
  Polytope() = default;
  explicit Polytope(std::size_t m) : m_(m) {}

  std::size_t dim() const { return m_; }
  const std::vector<Inequality>& inequalities() const { return inequalities_; }

  /// Adds the inequality unless it is tautologous (all coefficients and the
  /// right-hand side zero) or an identical one is already stored.  Returns
  /// whether it was added.
  bool add(Inequality ineq) {
    if (ineq.coeffs.size() != m_) throw AmbientMismatch("inequality length differs from polytope dimension");
    for (const auto& c : ineq.coeffs)
      if (sgn(c) < 0) throw PreconditionError("rank inequalities have nonnegative coefficients");
    bool all_zero = sgn(ineq.rhs) <= 0;
    for (const auto& c : ineq.coeffs) all_zero = all_zero && sgn(c) == 0;
    if (all_zero) return false;
    for (const auto& have : inequalities_)
      if (have.same_constraint(ineq)) return false;
    inequalities_.push_back(std::move(ineq));
    return true;
  }

  /// The inequality generated by a rank tuple (r; r_1..r_m): sum r_j s_j >= r.
  bool add_rank_constraint(const RankTuple& t, std::optional<Subspace> witness = std::nullopt) {
    Inequality ineq;
    for (auto r : t.r_sub) ineq.coeffs.emplace_back(static_cast<unsigned long>(r));
    ineq.rhs = static_cast<unsigned long>(t.r);
    ineq.witness = std::move(witness);
    return add(std::move(ineq));
  }

  /// Every stored inequality, ignoring the box.  Components may exceed 1.
  bool satisfies_inequalities(std::span<const Rational> s) const {
    if (s.size() != m_) throw AmbientMismatch("point length differs from polytope dimension");
    for (const auto& ineq : inequalities_)
      if (!ineq.holds(s)) return false;
    return true;
  }

  /// Index of the first violated inequality, if any.
  std::optional<std::size_t> first_violated(std::span<const Rational> s) const {
    for (std::size_t i = 0; i < inequalities_.size(); ++i)
      if (!inequalities_[i].holds(s)) return i;
    return std::nullopt;
  }

 private:
  std::size_t m_ = 0;
  std::vector<Inequality> inequalities_;
};

/// One inequality per subspace (skipping the zero subspace and duplicates;
/// the first witness of each inequality is kept).
inline Polytope from_rank_constraints(const HblDatum& d, std::span<const Subspace> subspaces) {
  Polytope p(d.num_maps());
  for (const auto& w : subspaces) {
    require_same_ambient(d, w, "from_rank_constraints");
    if (w.is_zero()) continue;
    p.add_rank_constraint(rank_tuple(d, w), w);
  }
  return p;
}

/// Exact membership in P, box included.  Throws if a component lies
/// outside [0,1].
inline bool contains(const Polytope& p, std::span<const Rational> s) {
  require_unit_exponents(s, p.dim());
  return p.satisfies_inequalities(s);
}

namespace detail {

struct Constraint {
  std::vector<Rational> normal;
  Rational rhs;
  ConstraintRef ref;
};

inline std::vector<Constraint> enlarged_family(const Polytope& p) {
  const std::size_t m = p.dim();
  std::vector<Constraint> out;
  for (std::size_t i = 0; i < p.inequalities().size(); ++i) {
    const auto& ineq = p.inequalities()[i];
    Constraint c;
    for (const auto& v : ineq.coeffs) c.normal.emplace_back(v);
    c.rhs = ineq.rhs;
    c.ref = {ConstraintRef::Kind::inequality, i};
    out.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < m; ++j) {
    Constraint lo{std::vector<Rational>(m), Rational(0), {ConstraintRef::Kind::lower, j}};
    lo.normal[j] = 1;
    out.push_back(std::move(lo));
  }
  for (std::size_t j = 0; j < m; ++j) {
    Constraint hi{std::vector<Rational>(m), Rational(-1), {ConstraintRef::Kind::upper, j}};
    hi.normal[j] = -1;
    out.push_back(std::move(hi));
  }
  return out;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) acc += a[i] * b[i];
  return acc;
}

struct LexLess {
  bool operator()(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
    return lex_less(a, b);
  }
};

}  // namespace detail

/// Every extreme point of P, each once, sorted lexicographically.  Method:
/// adjoin the 2m box inequalities, solve every m-subset with independent
/// normals, keep solutions satisfying all constraints.
inline std::vector<Vertex> extreme_points(const Polytope& p) {
  const std::size_t m = p.dim();
  const auto family = detail::enlarged_family(p);
  const std::size_t total = family.size();
  std::map<std::vector<Rational>, bool, detail::LexLess> found;

  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  RationalMatrix a(m, m);
  std::vector<Rational> b(m);
  while (true) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a(r, c) = family[pick[r]].normal[c];
      b[r] = family[pick[r]].rhs;
    }
    if (auto x = solve_square(a, b); x && !found.contains(*x)) {
      bool feasible = true;
      for (const auto& c : family) {
        if (detail::dot(c.normal, *x) < c.rhs) {
          feasible = false;
          break;
        }
      }
      if (feasible) found.emplace(std::move(*x), true);
    }
    // Next m-subset in lexicographic order.
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == total - m + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < m; ++k) pick[k] = pick[k - 1] + 1;
  }

  std::vector<Vertex> out;
  out.reserve(found.size());
  for (const auto& [point, unused] : found) {
    Vertex v{point, {}};
    for (const auto& c : family)
      if (detail::dot(c.normal, point) == c.rhs) v.active.push_back(c.ref);
    std::sort(v.active.begin(), v.active.end());
    out.push_back(std::move(v));
  }
  return out;
}

struct LinearMinimum {
  Rational value;
  Vertex argmin;
};

/// min <w, s> over P, attained at the lexicographically smallest minimizing
/// vertex.
inline LinearMinimum minimize_linear(const Polytope& p, std::span<const Rational> w) {
  if (w.size() != p.dim()) throw AmbientMismatch("weight vector length differs from polytope dimension");
  auto vertices = extreme_points(p);
  if (vertices.empty()) throw PreconditionError("minimize_linear: polytope is empty");
  std::optional<LinearMinimum> best;
  for (auto& v : vertices) {  // sorted, so the first minimizer is lexicographically smallest
    Rational value = detail::dot(w, v.point);
    if (!best || value < best->value) best = LinearMinimum{std::move(value), std::move(v)};
  }
  return *best;
}

/// Equality of the represented sets, by mutual containment of extreme points.
inline bool polytopes_equal(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw AmbientMismatch("polytopes_equal: dimensions differ");
  for (const auto& v : extreme_points(p))
    if (!q.satisfies_inequalities(v.point)) return false;
  for (const auto& v : extreme_points(q))
    if (!p.satisfies_inequalities(v.point)) return false;
  return true;
}

}  // namespace hbl
