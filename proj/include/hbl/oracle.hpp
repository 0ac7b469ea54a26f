#pragma once

// Brute-force checks of the inequalities themselves: the set form with
// constant 1 (exact), the function form (floating point), counterexample
// families for infeasible exponents, and a bounded-height polytope.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/enumerate.hpp"
#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/polytope.hpp"
#include "hbl/rational.hpp"

namespace hbl {

using Point = std::vector<std::int64_t>;

/// A finite duplicate-free set of integer vectors of one length.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<Point> points) : dim_(dim) {
    std::set<Point> seen;
    for (auto& p : points) {
      if (p.size() != dim_) throw AmbientMismatch("point length differs from point set dimension");
      if (seen.insert(p).second) points_.push_back(std::move(p));
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point>& points() const { return points_; }

 private:
  std::size_t dim_ = 0;
  std::vector<Point> points_;
};

/// A nonnegative function on Z^{d_j} with finite support.  Zero values are
/// dropped on insertion.
class FunctionTable {
 public:
  void set(Point x, const Rational& value) {
    if (sgn(value) < 0) throw PreconditionError("function values must be nonnegative");
    if (sgn(value) == 0) {
      values_.erase(x);
      return;
    }
    values_[std::move(x)] = value;
  }
  const std::map<Point, Rational>& support() const { return values_; }
  const Rational* find(const Point& x) const {
    auto it = values_.find(x);
    return it == values_.end() ? nullptr : &it->second;
  }

 private:
  std::map<Point, Rational> values_;
};

namespace detail {

inline std::vector<Rational> apply_map(const RationalMatrix& m, std::span<const std::int64_t> x) {
  std::vector<Rational> y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (x[j] != 0 && sgn(m(i, j)) != 0) y[i] += m(i, j) * Rational(static_cast<long>(x[j]));
  return y;
}

inline std::size_t image_size(const RationalMatrix& m, const PointSet& e) {
  std::set<std::vector<Rational>, LexLess> images;
  for (const auto& x : e.points()) images.insert(apply_map(m, x));
  return images.size();
}

}  // namespace detail

/// Natural logarithm of a positive big integer.
inline double log_integer(const Integer& n) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

struct SetCheck {
  bool holds = false;
  Integer lhs_pow;  ///< |E|^L
  Integer rhs_pow;  ///< prod_j |phi_j(E)|^(s_j L)
};

/// Decides |E| <= prod_j |phi_j(E)|^{s_j} exactly, after raising both sides
/// to the power L = lcm of the denominators of s.
inline SetCheck verify_set_inequality(const HblDatum& d, std::span<const Rational> s, const PointSet& e) {
  require_unit_exponents(s, d.num_maps());
  if (e.empty()) throw PreconditionError("verify_set_inequality: E is empty");
  if (e.dim() != d.ambient_dim()) throw AmbientMismatch("point set dimension differs from ambient dimension");
  const Integer l = common_denominator(s);
  SetCheck out;
  out.lhs_pow = pow(Integer(static_cast<unsigned long>(e.size())), l.get_ui());
  out.rhs_pow = 1;
  for (std::size_t j = 0; j < d.num_maps(); ++j) {
    const Integer exponent = Rational(s[j] * l).get_num();
    const std::size_t n = detail::image_size(d.map(j), e);
    out.rhs_pow *= pow(Integer(static_cast<unsigned long>(n)), exponent.get_ui());
  }
  out.holds = out.lhs_pow <= out.rhs_pow;
  return out;
}

struct FunctionCheck {
  bool holds = false;
  double lhs = 0;
  double rhs = 0;
};

/// Checks sum_x prod_j f_j(phi_j(x)) <= prod_j ||f_j||_{1/s_j} over x in Z^d,
/// in double precision with relative tolerance `tol`.  The sum runs over
/// the finitely many x whose images all lie in the supports; this needs the
/// maps to have trivial common kernel.
inline FunctionCheck verify_function_inequality(const HblDatum& d, std::span<const Rational> s,
                                                std::span<const FunctionTable> f, double tol) {
  require_unit_exponents(s, d.num_maps());
  if (f.size() != d.num_maps()) throw AmbientMismatch("need one function table per map");
  const std::size_t dim = d.ambient_dim();

  FunctionCheck out;
  out.rhs = 1;
  for (std::size_t j = 0; j < f.size(); ++j) {
    double norm = 0;
    if (sgn(s[j]) == 0) {
      for (const auto& [x, v] : f[j].support()) norm = std::max(norm, v.get_d());
    } else {
      const double p = 1 / s[j].get_d();
      for (const auto& [x, v] : f[j].support()) norm += std::pow(v.get_d(), p);
      norm = std::pow(norm, s[j].get_d());
    }
    out.rhs *= norm;
  }

  // Pick independent rows of the stacked maps greedily; the maps owning
  // them determine x from their values.
  RationalMatrix stacked = d.map(0);
  for (std::size_t j = 1; j < d.num_maps(); ++j) stacked = RationalMatrix::stack(stacked, d.map(j));
  if (rank(stacked) < dim) {
    bool any_empty = false;
    for (const auto& t : f) any_empty = any_empty || t.support().empty();
    if (!any_empty) throw UnsupportedInstance("maps share a nontrivial kernel: infinitely many candidates");
    out.holds = true;
    return out;
  }
  std::vector<std::size_t> owners;
  std::vector<std::pair<std::size_t, std::size_t>> chosen;  // (map, row)
  {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t j = 0; j < d.num_maps() && chosen.size() < dim; ++j) {
      for (std::size_t i = 0; i < d.map(j).rows() && chosen.size() < dim; ++i) {
        auto trial = rows;
        trial.emplace_back(d.map(j).row(i).begin(), d.map(j).row(i).end());
        if (rank(RationalMatrix::from_rows(trial, dim)) == trial.size()) {
          rows = std::move(trial);
          chosen.emplace_back(j, i);
          if (owners.empty() || owners.back() != j) owners.push_back(j);
        }
      }
    }
  }
  RationalMatrix a(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a(r, c) = d.map(chosen[r].first)(chosen[r].second, c);

  std::vector<std::vector<const Point*>> choices;
  for (auto j : owners) {
    std::vector<const Point*> pts;
    for (const auto& [x, v] : f[j].support()) pts.push_back(&x);
    if (pts.empty()) {
      out.holds = true;
      return out;
    }
    choices.push_back(std::move(pts));
  }

  std::set<Point> visited;
  std::vector<std::size_t> pick(owners.size(), 0);
  std::vector<Rational> b(dim);
  while (true) {
    for (std::size_t r = 0; r < dim; ++r) {
      const auto pos = std::find(owners.begin(), owners.end(), chosen[r].first) - owners.begin();
      b[r] = (*choices[pos][pick[pos]])[chosen[r].second];
    }
    if (auto x = solve_square(a, b)) {
      Point xi;
      bool integral = true;
      for (const auto& v : *x) {
        if (!is_integer(v) || !v.get_num().fits_slong_p()) {
          integral = false;
          break;
        }
        xi.push_back(v.get_num().get_si());
      }
      if (integral && visited.insert(xi).second) {
        double term = 1;
        for (std::size_t j = 0; j < d.num_maps() && term != 0; ++j) {
          const auto y = detail::apply_map(d.map(j), xi);
          Point yi;
          bool ok = true;
          for (const auto& v : y) {
            if (!is_integer(v)) ok = false;
            else yi.push_back(v.get_num().get_si());
          }
          const Rational* value = ok ? f[j].find(yi) : nullptr;
          term = value ? term * value->get_d() : 0;
        }
        out.lhs += term;
      }
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  out.holds = out.lhs <= out.rhs * (1 + tol);
  return out;
}

/// Integer spanning vectors of H: each basis row times its common denominator.
inline std::vector<Point> integer_basis(const Subspace& h) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    const auto row = h.basis().row(i);
    const Integer scale = common_denominator(row);
    Point p;
    for (const auto& v : row) {
      const Integer n = Rational(v * scale).get_num();
      if (!n.fits_slong_p()) throw UnsupportedInstance("witness basis entries exceed 64 bits");
      p.push_back(n.get_si());
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// E_N = { sum_i n_i e_i : n_i in 1..N } for an integer basis e of H.
inline PointSet counterexample_family(const HblDatum& d, std::span<const Rational> s, const Subspace& h,
                                      std::size_t n) {
  require_same_ambient(d, h, "counterexample_family");
  if (n == 0) throw PreconditionError("counterexample_family: N must be at least 1");
  if (classify(d, h, s) != Criticality::supercritical) {
    throw PreconditionError("counterexample_family: H is not supercritical for s");
  }
  const auto basis = integer_basis(h);
  std::vector<Point> points;
  std::vector<std::size_t> coef(basis.size(), 1);
  while (true) {
    Point x(d.ambient_dim(), 0);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t c = 0; c < x.size(); ++c) x[c] += static_cast<std::int64_t>(coef[i]) * basis[i][c];
    points.push_back(std::move(x));
    std::size_t i = 0;
    while (i < coef.size() && ++coef[i] > n) coef[i++] = 1;
    if (i == coef.size()) break;
  }
  return PointSet(d.ambient_dim(), std::move(points));
}

struct Counterexample {
  std::size_t n = 0;
  PointSet points;
  SetCheck check;
};

/// The smallest N <= max_n whose E_N violates the set inequality.
inline std::optional<Counterexample> find_counterexample(const HblDatum& d, std::span<const Rational> s,
                                                         const Subspace& h, std::size_t max_n) {
  for (std::size_t n = 1; n <= max_n; ++n) {
    PointSet e = counterexample_family(d, s, h, n);
    SetCheck c = verify_set_inequality(d, s, e);
    if (!c.holds) return Counterexample{n, std::move(e), std::move(c)};
  }
  return std::nullopt;
}

/// The first enumerated subspace that is supercritical for s, searching at
/// most `limit` subspaces.
inline std::optional<Subspace> find_supercritical(const HblDatum& d, std::span<const Rational> s,
                                                  std::size_t limit) {
  auto& subspaces = shared_enumerator(d.ambient_dim());
  for (std::size_t i = 0; i < limit && subspaces.ensure(i + 1); ++i) {
    Subspace w = subspaces.subspace(i);
    if (classify(d, w, s) == Criticality::supercritical) return w;
  }
  return std::nullopt;
}

/// Rank inequalities of every subspace spanned by integer vectors with
/// entries in [-height, height]: an outer approximation of the polytope.
inline Polytope brute_force_constraints(const HblDatum& d, std::size_t height) {
  if (height == 0) throw PreconditionError("brute_force_constraints: height must be at least 1");
  auto& subspaces = shared_enumerator(d.ambient_dim());
  const std::size_t count = subspaces.size_through_height(height);
  const detail::SmallMaps small(d);
  Polytope p(d.num_maps());
  for (std::size_t i = 0; i < count; ++i) {
    const SpanItem item = subspaces.item(i);
    if (item.dim == 0) continue;
    const auto tuple = small.rank_tuple(item.rows, item.dim);
    if (!tuple) {
      const Subspace w = to_subspace(item, d.ambient_dim());
      p.add_rank_constraint(rank_tuple(d, w), w);
      continue;
    }
    Inequality ineq;
    for (auto r : tuple->r_sub) ineq.coeffs.emplace_back(static_cast<unsigned long>(r));
    ineq.rhs = static_cast<unsigned long>(tuple->r);
    bool fresh = true;
    for (const auto& have : p.inequalities()) fresh = fresh && !have.same_constraint(ineq);
    if (!fresh) continue;
    ineq.witness = to_subspace(item, d.ambient_dim());
    p.add(std::move(ineq));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Seeded samplers.  Sample i of a batch uses its own engine seeded from
// (seed, i), so batches can be split or reordered without changing samples.

inline std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// One random point set in [-box, box]^d with at most max_size points.  The
/// shape rotates with the index: uniform, grid, line, union of cosets.
inline PointSet sample_point_set(std::size_t d, std::uint64_t seed, std::uint64_t index, std::int64_t box,
                                 std::size_t max_size) {
  if (max_size == 0) throw PreconditionError("max_size must be at least 1");
  if (box < 0) throw PreconditionError("box must be nonnegative");
  auto rng = sample_engine(seed, index);
  std::vector<Point> pts;
  auto random_point = [&] {
    Point p(d);
    for (auto& v : p) v = uniform(rng, -box, box);
    return p;
  };
  auto clamp_add = [&](Point p) {
    for (auto v : p)
      if (v < -box || v > box) return;
    if (pts.size() < max_size) pts.push_back(std::move(p));
  };

  switch (index % 4) {
    case 0: {
      const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_size)));
      for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point());
      break;
    }
    case 1: {  // axis box grid
      Point lo = random_point(), side(d);
      for (auto& v : side) v = uniform(rng, 1, 5);
      Point x = lo;
      std::vector<std::int64_t> k(d, 0);
      while (pts.size() < max_size) {
        for (std::size_t c = 0; c < d; ++c) x[c] = lo[c] + k[c];
        clamp_add(x);
        std::size_t i = 0;
        while (i < d && ++k[i] == side[i]) k[i++] = 0;
        if (i == d) break;
      }
      break;
    }
    case 2: {  // arithmetic progression along a random direction
      Point start = random_point(), step(d);
      for (auto& v : step) v = uniform(rng, -2, 2);
      const auto n = uniform(rng, 1, static_cast<std::int64_t>(max_size));
      for (std::int64_t t = 0; t < n; ++t) {
        Point x(d);
        for (std::size_t c = 0; c < d; ++c) x[c] = start[c] + t * step[c];
        clamp_add(std::move(x));
      }
      break;
    }
    default: {  // small grid translated to a few random offsets
      Point side(d);
      for (auto& v : side) v = uniform(rng, 1, 3);
      const auto copies = uniform(rng, 1, 4);
      for (std::int64_t c = 0; c < copies; ++c) {
        const Point off = random_point();
        std::vector<std::int64_t> k(d, 0);
        while (true) {
          Point x(d);
          for (std::size_t i = 0; i < d; ++i) x[i] = off[i] + k[i];
          clamp_add(std::move(x));
          std::size_t i = 0;
          while (i < d && ++k[i] == side[i]) k[i++] = 0;
          if (i == d) break;
        }
      }
      break;
    }
  }
  if (pts.empty()) pts.push_back(random_point());
  return PointSet(d, std::move(pts));
}

/// Random nonnegative rational tables for every map: the images of a random
/// point set, valued p/q with p in 1..20, q in 1..10, plus a few stray
/// support points.
inline std::vector<FunctionTable> sample_function_tables(const HblDatum& d, std::uint64_t seed,
                                                         std::uint64_t index) {
  const PointSet e = sample_point_set(d.ambient_dim(), seed, index, 3, 20);
  auto rng = sample_engine(seed, index ^ 0x9e3779b97f4a7c15ULL);
  std::vector<FunctionTable> out(d.num_maps());
  auto value = [&] { return make_rational(uniform(rng, 1, 20), uniform(rng, 1, 10)); };
  for (std::size_t j = 0; j < d.num_maps(); ++j) {
    if (!d.map(j).is_integral()) throw UnsupportedInstance("function tables need integral maps");
    for (const auto& x : e.points()) {
      Point y;
      for (const auto& v : detail::apply_map(d.map(j), x)) y.push_back(v.get_num().get_si());
      out[j].set(std::move(y), value());
    }
    const auto strays = uniform(rng, 0, 3);
    for (std::int64_t k = 0; k < strays; ++k) {
      Point y(d.map(j).rows());
      for (auto& v : y) v = uniform(rng, -6, 6);
      out[j].set(std::move(y), value());
    }
  }
  return out;
}

struct Violation {
  std::size_t trial = 0;
  PointSet points;  ///< empty for function-form reports
};

struct VerifyReport {
  std::size_t trials = 0;
  std::vector<Violation> violations;
  double worst_ratio_log = -INFINITY;  ///< max over trials of log(lhs / rhs)
};

inline VerifyReport verify_sets_batch(const HblDatum& d, std::span<const Rational> s, std::size_t samples,
                                      std::uint64_t seed, std::int64_t box, std::size_t max_size) {
  VerifyReport report;
  report.trials = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    PointSet e = sample_point_set(d.ambient_dim(), seed, i, box, max_size);
    const SetCheck c = verify_set_inequality(d, s, e);
    const Integer l = common_denominator(s);
    const double ratio = (log_integer(c.lhs_pow) - log_integer(c.rhs_pow)) / l.get_d();
    report.worst_ratio_log = std::max(report.worst_ratio_log, ratio);
    if (!c.holds) report.violations.push_back({i, std::move(e)});
  }
  return report;
}

inline VerifyReport verify_functions_batch(const HblDatum& d, std::span<const Rational> s, std::size_t samples,
                                           std::uint64_t seed, double tol) {
  VerifyReport report;
  report.trials = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto tables = sample_function_tables(d, seed, i);
    const FunctionCheck c = verify_function_inequality(d, s, tables, tol);
    if (c.lhs > 0) report.worst_ratio_log = std::max(report.worst_ratio_log, std::log(c.lhs / c.rhs));
    if (!c.holds) report.violations.push_back({i, {}});
  }
  return report;
}

}  // namespace hbl
