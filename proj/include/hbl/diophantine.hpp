#pragma once

// Rational points of polynomial systems as rank-realizability instances.
//
// to_basic_set replaces every monomial x^alpha (alpha in {0..d}^q) by a
// variable u_alpha, tied together by u_0 = 1 and u_{a+b} = u_a u_b.  encode
// turns a basic system and a query prefix a into integer matrices f_1..f_mu
// on Q^nu such that a extends to a solution iff some 2-dimensional V has
// dim f_i(V) = rho_i for every i.
//
// Encoding coordinates are (u_0, u_1..u_q; v_0, v_1..v_q) where u_0, v_0 are
// homogenizing coordinates and u_{i+1}, v_{i+1} belong to basic variable i.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/matrix.hpp"
#include "hbl/rational.hpp"

namespace hbl {

using Exponents = std::vector<unsigned>;

/// A nonzero polynomial in q variables with rational coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t q) : q_(q) {}

  std::size_t num_vars() const { return q_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds coeff * x^exps, merging like terms.
  void add_term(Exponents exps, const Rational& coeff) {
    if (exps.size() != q_) throw AmbientMismatch("exponent vector length differs from variable count");
    Rational& slot = terms_[exps];
    slot += coeff;
    if (sgn(slot) == 0) terms_.erase(exps);
  }

  unsigned degree_in(std::size_t var) const {
    unsigned deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e[var]);
    return deg;
  }

  Rational evaluate(std::span<const Rational> x) const {
    if (x.size() != q_) throw AmbientMismatch("point length differs from variable count");
    Rational total = 0;
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      for (std::size_t i = 0; i < q_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
      total += term;
    }
    return total;
  }

 private:
  std::size_t q_ = 0;
  std::map<Exponents, Rational> terms_;
};

struct PolySystem {
  std::size_t q = 0;
  std::vector<Polynomial> polys;

  bool satisfied_by(std::span<const Rational> x) const {
    for (const auto& f : polys)
      if (sgn(f.evaluate(x)) != 0) return false;
    return true;
  }
};

/// constant + sum coeffs[i] * u_i = 0
struct AffineRelation {
  Integer constant;
  std::vector<std::pair<std::size_t, Integer>> coeffs;  ///< sorted by variable, nonzero
};

/// u_alpha * u_beta = u_gamma
struct MultRelation {
  std::size_t alpha = 0, beta = 0, gamma = 0;
  friend bool operator==(const MultRelation&, const MultRelation&) = default;
};

struct BasicSystem {
  std::size_t num_vars = 0;
  std::vector<AffineRelation> affine;
  std::vector<MultRelation> mults;
  std::vector<std::size_t> projection;  ///< variable holding x_i, for each original i
  std::vector<Exponents> monomials;     ///< exponent vector of each variable (from to_basic_set)

  bool satisfied_by(std::span<const Rational> u) const {
    if (u.size() != num_vars) throw AmbientMismatch("solution length differs from basic variable count");
    for (const auto& a : affine) {
      Rational total = a.constant;
      for (const auto& [i, c] : a.coeffs) total += u[i] * c;
      if (sgn(total) != 0) return false;
    }
    for (const auto& m : mults)
      if (u[m.alpha] * u[m.beta] != u[m.gamma]) return false;
    return true;
  }
};

namespace detail {

/// Mixed-radix index of alpha in {0..d}^q, first variable most significant.
inline std::size_t monomial_index(const Exponents& alpha, unsigned d) {
  std::size_t idx = 0;
  for (auto e : alpha) idx = idx * (d + 1) + e;
  return idx;
}

}  // namespace detail

/// Monomial-lifting normal form.  Variables are indexed by {0..d}^q in
/// mixed-radix order (u_0 first); the pin u_0 = 1 is the first affine
/// relation, followed by one relation per polynomial; multiplicative
/// relations cover every alpha <= beta (by index), both nonzero, with
/// alpha + beta in the box.
inline BasicSystem to_basic_set(const PolySystem& s) {
  if (s.polys.empty()) throw PreconditionError("to_basic_set: the system has no polynomials");
  unsigned d = 1;
  for (const auto& f : s.polys) {
    if (f.num_vars() != s.q) throw AmbientMismatch("polynomial variable count differs from the system's");
    if (f.is_zero()) throw PreconditionError("to_basic_set: zero polynomial");
    for (std::size_t i = 0; i < s.q; ++i) d = std::max(d, f.degree_in(i));
  }

  BasicSystem b;
  std::size_t total = 1;
  for (std::size_t i = 0; i < s.q; ++i) total *= d + 1;
  b.num_vars = total;
  b.monomials.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Exponents e(s.q);
    std::size_t rest = idx;
    for (std::size_t i = s.q; i-- > 0;) {
      e[i] = static_cast<unsigned>(rest % (d + 1));
      rest /= d + 1;
    }
    b.monomials[idx] = std::move(e);
  }
  for (std::size_t i = 0; i < s.q; ++i) {
    Exponents e(s.q, 0);
    e[i] = 1;
    b.projection.push_back(detail::monomial_index(e, d));
  }

  b.affine.push_back(AffineRelation{Integer(-1), {{0, Integer(1)}}});
  for (const auto& f : s.polys) {
    Integer scale = 1;
    for (const auto& [e, c] : f.terms()) scale = lcm(scale, c.get_den());
    AffineRelation rel;
    rel.constant = 0;
    for (const auto& [e, c] : f.terms()) {
      rel.coeffs.emplace_back(detail::monomial_index(e, d), Rational(c * scale).get_num());
    }
    std::sort(rel.coeffs.begin(), rel.coeffs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    b.affine.push_back(std::move(rel));
  }

  for (std::size_t a = 1; a < total; ++a) {
    for (std::size_t c = a; c < total; ++c) {
      Exponents sum(s.q);
      bool inside = true;
      for (std::size_t i = 0; i < s.q; ++i) {
        sum[i] = b.monomials[a][i] + b.monomials[c][i];
        inside = inside && sum[i] <= d;
      }
      if (inside) b.mults.push_back({a, c, detail::monomial_index(sum, d)});
    }
  }
  return b;
}

/// chi(x): the value of every monomial of the basic system at x.
inline std::vector<Rational> lift_solution(const BasicSystem& b, std::span<const Rational> x) {
  if (x.size() != b.projection.size()) throw AmbientMismatch("point length differs from original variable count");
  std::vector<Rational> u;
  u.reserve(b.num_vars);
  for (const auto& e : b.monomials) {
    Rational v = 1;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) v *= x[i];
    u.push_back(std::move(v));
  }
  return u;
}

struct DiophEncoding {
  std::size_t mu = 0;
  std::size_t nu = 0;
  std::size_t rho = 2;
  std::vector<std::size_t> rho_list;
  std::vector<RationalMatrix> maps;  ///< integer nu x nu matrices
  std::vector<Rational> a;           ///< queried values, lowest terms
  std::vector<std::size_t> query;    ///< basic variable of each queried value
  BasicSystem system;

  HblDatum datum() const { return HblDatum(nu, maps); }
};

/// Builds f(a).  The first t original variables are queried; a_j = p_j/q_j
/// in lowest terms with q_j > 0.
inline DiophEncoding encode(const BasicSystem& b, std::size_t t, std::span<const Rational> a) {
  if (a.size() != t) throw AmbientMismatch("query has " + std::to_string(a.size()) + " values, t = " + std::to_string(t));
  if (t > b.projection.size()) {
    throw PreconditionError("t = " + std::to_string(t) + " exceeds the " + std::to_string(b.projection.size()) +
                            " original variables");
  }
  const std::size_t q = b.num_vars;
  const std::size_t k = b.mults.size();
  const std::size_t l = b.affine.size();

  DiophEncoding e;
  e.nu = 2 * q + 2;
  e.mu = 4 + q + t + k + l;
  e.system = b;
  e.query.assign(b.projection.begin(), b.projection.begin() + static_cast<std::ptrdiff_t>(t));
  for (const auto& v : a) {
    e.a.push_back(v);
    e.a.back().canonicalize();
  }
  e.rho_list.assign(4 + q + k, 1);
  e.rho_list.resize(e.mu, 0);

  const std::size_t nu = e.nu;
  auto u = [](std::size_t i) { return i; };             // u_0..u_q
  auto v = [q](std::size_t i) { return q + 1 + i; };    // v_0..v_q
  auto blank = [nu] { return RationalMatrix(nu, nu); };

  RationalMatrix m = blank();
  m(0, u(0)) = 1;
  e.maps.push_back(m);
  m = blank();
  m(0, v(0)) = 1;
  e.maps.push_back(m);
  m = blank();
  for (std::size_t i = 0; i <= q; ++i) m(i, u(i)) = 1;
  e.maps.push_back(m);
  m = blank();
  for (std::size_t i = 0; i <= q; ++i) m(i, v(i)) = 1;
  e.maps.push_back(m);
  for (std::size_t j = 1; j <= q; ++j) {
    m = blank();
    m(0, u(0)) = 1;
    m(0, v(0)) = -1;
    m(1, u(j)) = 1;
    m(1, v(j)) = -1;
    e.maps.push_back(m);
  }
  for (const auto& rel : b.mults) {
    m = blank();
    m(0, u(rel.alpha + 1)) += 1;
    m(0, v(0)) += 1;
    m(1, u(rel.gamma + 1)) += 1;
    m(1, v(rel.beta + 1)) += 1;
    e.maps.push_back(m);
  }
  for (std::size_t j = 0; j < t; ++j) {
    m = blank();
    m(0, u(0)) = Rational(e.a[j].get_num());
    m(0, u(e.query[j] + 1)) = Rational(-e.a[j].get_den());
    e.maps.push_back(m);
  }
  for (const auto& rel : b.affine) {
    m = blank();
    m(0, u(0)) = Rational(rel.constant);
    for (const auto& [i, c] : rel.coeffs) m(0, u(i + 1)) += Rational(c);
    e.maps.push_back(m);
  }
  return e;
}

/// span{(1, c; 0), (0; 1, c)} in Q^{2q+2}.
inline Subspace witness_from_solution(const BasicSystem& b, std::span<const Rational> c) {
  if (!b.satisfied_by(c)) throw PreconditionError("witness_from_solution: c does not satisfy the basic system");
  const std::size_t q = b.num_vars;
  RationalMatrix basis(2, 2 * q + 2);
  basis(0, 0) = 1;
  basis(1, q + 1) = 1;
  for (std::size_t i = 0; i < q; ++i) {
    basis(0, i + 1) = c[i];
    basis(1, q + 2 + i) = c[i];
  }
  return Subspace::span(basis);
}

inline bool verify_witness(const DiophEncoding& e, const Subspace& w) {
  if (w.ambient_dim() != e.nu) {
    throw AmbientMismatch("witness lives in Q^" + std::to_string(w.ambient_dim()) + ", encoding in Q^" +
                          std::to_string(e.nu));
  }
  if (w.dim() != e.rho) return false;
  return rank_tuple(e.datum(), w).r_sub == e.rho_list;
}

struct Extraction {
  std::vector<Rational> a;     ///< the queried values, recovered
  std::vector<Rational> full;  ///< a solution of the basic system
};

/// Row-reduces a basis of the witness to g = (0; 1, g), h = (1, h; 0) and
/// reads the solution off h.
inline Extraction extract_solution(const DiophEncoding& e, const Subspace& w) {
  if (!verify_witness(e, w)) throw PreconditionError("extract_solution: not a valid witness");
  const std::size_t q = e.system.num_vars;
  const std::size_t n = e.nu;
  std::vector<Rational> d(w.basis().row(0).begin(), w.basis().row(0).end());
  std::vector<Rational> f(w.basis().row(1).begin(), w.basis().row(1).end());
  if (sgn(d[0]) == 0) std::swap(d, f);
  if (sgn(d[0]) == 0) throw std::logic_error("extract_solution: u_0 vanishes on the witness");
  const Rational d0 = d[0];
  for (auto& x : d) x /= d0;

  const Rational gamma = f[0];
  std::vector<Rational> gt(n);
  for (std::size_t i = 0; i < n; ++i) gt[i] = f[i] - gamma * d[i];
  for (std::size_t i = 0; i <= q; ++i)
    if (sgn(gt[i]) != 0) throw std::logic_error("extract_solution: u-block rank exceeds one");
  if (sgn(gt[q + 1]) == 0) throw std::logic_error("extract_solution: v_0 vanishes on the reduced vector");

  const Rational delta = d[q + 1] / gt[q + 1];
  std::vector<Rational> h(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = d[i] - delta * gt[i];
    g[i] = gt[i] / gt[q + 1];
  }
  for (std::size_t i = 0; i <= q; ++i) {
    if (sgn(h[q + 1 + i]) != 0) throw std::logic_error("extract_solution: h has a v-component");
    if (h[i] != g[q + 1 + i]) throw std::logic_error("extract_solution: g and h disagree");
  }

  Extraction out;
  out.full.assign(h.begin() + 1, h.begin() + 1 + static_cast<std::ptrdiff_t>(q));
  for (auto idx : e.query) out.a.push_back(out.full[idx]);
  if (out.a != e.a) throw std::logic_error("extract_solution: recovered query differs from a");
  if (!e.system.satisfied_by(out.full)) throw std::logic_error("extract_solution: recovered point is not a solution");
  return out;
}

/// Looks for a witness spanned by integer vectors with entries in
/// [-height, height].  Any witness has the form span{(1, c; 0), (0; 1, c)}
/// with c a solution, and such a span has integer generators of height h
/// exactly when c = n/k with k in 1..h and |n_i| <= h; so the search runs
/// over those c (in lowest terms, queried coordinates fixed to k a_j) in
/// order of k, then n lexicographically.
///
/// An empty result does NOT show that no witness exists: the question is
/// as hard as Hilbert's tenth problem over Q.
inline std::optional<Subspace> bounded_witness_search(const DiophEncoding& e, std::size_t height) {
  if (height == 0) throw PreconditionError("bounded_witness_search: height must be at least 1");
  const std::size_t q = e.system.num_vars;
  const auto h = static_cast<long>(height);

  std::vector<std::optional<Rational>> fixed(q);
  for (std::size_t j = 0; j < e.query.size(); ++j) {
    auto& slot = fixed[e.query[j]];
    if (slot && *slot != e.a[j]) return std::nullopt;
    slot = e.a[j];
  }
  std::vector<std::size_t> free_vars;
  for (std::size_t i = 0; i < q; ++i)
    if (!fixed[i]) free_vars.push_back(i);

  for (long k = 1; k <= h; ++k) {
    std::vector<Integer> n(q);
    bool ok = true;
    for (std::size_t i = 0; i < q && ok; ++i) {
      if (!fixed[i]) continue;
      const Rational scaled = *fixed[i] * k;
      ok = is_integer(scaled) && abs(scaled.get_num()) <= h;
      if (ok) n[i] = scaled.get_num();
    }
    if (!ok) continue;
    std::vector<long> counter(free_vars.size(), -h);
    while (true) {
      for (std::size_t f = 0; f < free_vars.size(); ++f) n[free_vars[f]] = counter[f];
      Integer g = k;
      for (const auto& x : n) g = gcd(g, x);
      if (g == 1) {
        std::vector<Rational> c(q);
        for (std::size_t i = 0; i < q; ++i) c[i] = make_rational(n[i], Integer(k));
        if (e.system.satisfied_by(c)) {
          Subspace w = witness_from_solution(e.system, c);
          if (!verify_witness(e, w)) throw std::logic_error("bounded_witness_search: solution gave an invalid witness");
          return w;
        }
      }
      std::size_t i = free_vars.size();
      while (i > 0 && counter[i - 1] == h) counter[--i] = -h;
      if (i == 0) break;
      ++counter[i - 1];
    }
  }
  return std::nullopt;
}

}  // namespace hbl
