#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace hbl;
using fixtures::q;

namespace {

Subspace span_of(std::initializer_list<std::initializer_list<long>> rows) {
  return Subspace::span(RationalMatrix::from_ints(rows));
}

PointSet cube(std::size_t d, std::int64_t n) {
  std::vector<Point> pts;
  Point x(d, 0);
  while (true) {
    pts.push_back(x);
    std::size_t i = 0;
    while (i < d && ++x[i] == n) x[i++] = 0;
    if (i == d) break;
  }
  return PointSet(d, pts);
}

std::vector<oracle::Ineq> to_oracle(const Polytope& p) {
  std::vector<oracle::Ineq> out;
  for (const auto& i : p.inequalities()) {
    oracle::Ineq o;
    for (const auto& c : i.coeffs) o.coeffs.push_back(c.get_si());
    o.rhs = i.rhs.get_si();
    out.push_back(o);
  }
  return out;
}

// Left side of the function form by scanning a box of x.
double naive_lhs(const HblDatum& d, const std::vector<FunctionTable>& f, std::int64_t box) {
  double total = 0;
  Point x(d.ambient_dim(), -box);
  while (true) {
    double term = 1;
    for (std::size_t j = 0; j < d.num_maps() && term != 0; ++j) {
      Point y;
      for (const auto& v : detail::apply_map(d.map(j), x)) y.push_back(v.get_num().get_si());
      const Rational* value = f[j].find(y);
      term = value ? term * value->get_d() : 0;
    }
    total += term;
    std::size_t i = 0;
    while (i < x.size() && x[i] == box) x[i++] = -box;
    if (i == x.size()) break;
    ++x[i];
  }
  return total;
}

}  // namespace

TEST(VerifySets, Singletons) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto d = fixtures::random_datum(401, i);
    auto rng = sample_engine(402, i);
    Point x(d.ambient_dim());
    for (auto& v : x) v = uniform(rng, -10, 10);
    std::vector<Rational> s(d.num_maps());
    for (auto& v : s) v = make_rational(uniform(rng, 0, 6), 6);
    const auto c = verify_set_inequality(d, s, PointSet(d.ambient_dim(), {x}));
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.lhs_pow, 1);
    EXPECT_EQ(c.rhs_pow, 1);
  }
}

TEST(VerifySets, GridEqualities) {
  for (std::int64_t n = 1; n <= 5; ++n) {
    auto c = verify_set_inequality(fixtures::loomis_whitney_2d(), q({"1", "1"}), cube(2, n));
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.lhs_pow, c.rhs_pow);
    EXPECT_EQ(c.lhs_pow, n * n);

    c = verify_set_inequality(fixtures::matmul(), q({"1/2", "1/2", "1/2"}), cube(3, n));
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.lhs_pow, c.rhs_pow);
    EXPECT_EQ(c.lhs_pow, Integer(n * n * n) * (n * n * n));
  }
}

TEST(VerifySets, Errors) {
  EXPECT_THROW(verify_set_inequality(fixtures::matmul(), q({"1", "1", "1"}), PointSet(3, {})), PreconditionError);
  EXPECT_THROW(verify_set_inequality(fixtures::matmul(), q({"1", "1", "1"}), cube(2, 2)), AmbientMismatch);
  EXPECT_THROW(verify_set_inequality(fixtures::matmul(), q({"1", "1"}), cube(3, 2)), AmbientMismatch);
}

TEST(VerifySets, ViolationBelowPolytope) {
  const auto c = verify_set_inequality(fixtures::matmul(), q({"1/2", "1/2", "1/4"}), cube(3, 2));
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.lhs_pow, 4096);
  EXPECT_EQ(c.rhs_pow, 1024);
}

TEST(Counterexample, Examples) {
  const auto mm = fixtures::matmul();
  const auto e = counterexample_family(mm, q({"1/2", "1/2", "1/4"}), Subspace::full(3), 2);
  EXPECT_EQ(e.size(), 8u);
  const auto c = verify_set_inequality(mm, q({"1/2", "1/2", "1/4"}), e);
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.lhs_pow, 4096);
  EXPECT_EQ(c.rhs_pow, 1024);

  EXPECT_THROW(counterexample_family(mm, q({"1", "1", "1"}), Subspace::full(3), 2), PreconditionError);

  const auto lw = fixtures::loomis_whitney_2d();
  const auto line = counterexample_family(lw, q({"0", "1"}), span_of({{1, 0}}), 2);
  EXPECT_EQ(line.size(), 2u);
  EXPECT_FALSE(verify_set_inequality(lw, q({"0", "1"}), line).holds);
  EXPECT_TRUE(verify_set_inequality(lw, q({"0", "1"}), counterexample_family(lw, q({"0", "1"}), span_of({{1, 0}}), 1)).holds);
}

TEST(Counterexample, OutsidePointsAreRefuted) {
  const auto mm = fixtures::matmul();
  const auto s = q({"9/20", "9/20", "9/20"});
  const auto h = find_supercritical(mm, s, 1000);
  ASSERT_TRUE(h);
  const auto found = find_counterexample(mm, s, *h, 32);
  ASSERT_TRUE(found);
  EXPECT_FALSE(found->check.holds);
  EXPECT_LE(found->n, 32u);
}

TEST(Counterexample, IntegerBasisClearsDenominators) {
  const auto basis = integer_basis(Subspace::span(RationalMatrix::from_rows({q({"1", "1/2", "-1/3"})}, 3)));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], (Point{6, 3, -2}));
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(fixtures::points(extreme_points(brute_force_constraints(fixtures::loomis_whitney_2d(), 1))),
            (std::vector<oracle::Vec>{q({"1", "1"})}));
  EXPECT_EQ(fixtures::points(extreme_points(brute_force_constraints(fixtures::matmul(), 1))),
            (std::vector<oracle::Vec>{q({"0", "1", "1"}), q({"1/2", "1/2", "1/2"}), q({"1", "0", "1"}),
                                      q({"1", "1", "0"}), q({"1", "1", "1"})}));
  EXPECT_EQ(fixtures::points(extreme_points(brute_force_constraints(fixtures::identity(1), 1))),
            (std::vector<oracle::Vec>{q({"1"})}));
  EXPECT_THROW(brute_force_constraints(fixtures::matmul(), 0), PreconditionError);
}

TEST(BruteForce, MatchesNaiveConstraintsOfHeight) {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto d = fixtures::random_datum(403, i);
    for (long h = 1; h <= (d.ambient_dim() == 3 ? 1 : 2); ++h) {
      auto ours = to_oracle(brute_force_constraints(d, static_cast<std::size_t>(h)));
      std::sort(ours.begin(), ours.end());
      auto theirs = oracle::constraints_of_height(fixtures::to_oracle(d), d.ambient_dim(), h);
      theirs.erase(std::remove_if(theirs.begin(), theirs.end(),
                                  [](const oracle::Ineq& x) {
                                    return x.rhs == 0 && std::all_of(x.coeffs.begin(), x.coeffs.end(),
                                                                     [](long c) { return c == 0; });
                                  }),
                   theirs.end());
      EXPECT_EQ(ours, theirs) << "datum " << i << " height " << h;
    }
  }
}

TEST(BruteForce, MonotoneInHeight) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto d = fixtures::random_datum(404, i);
    const auto lo = brute_force_constraints(d, 1);
    const auto hi = brute_force_constraints(d, 2);
    for (const auto& v : extreme_points(hi)) EXPECT_TRUE(contains(lo, v.point)) << "datum " << i;
  }
}

TEST(BruteForce, ContainsComputedPolytope) {
  Decider decider;
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto d = fixtures::random_datum(405, i);
    const auto oracle_p = brute_force_constraints(d, 2);
    for (const auto& v : decider.compute_polytope(d).vertices) EXPECT_TRUE(contains(oracle_p, v.point));
  }
}

TEST(Sharpness, VerticesHoldOnSampledSets) {
  for (const auto& d : {fixtures::matmul(), fixtures::loomis_whitney_2d()}) {
    for (const auto& v : compute_polytope(d).vertices) {
      const auto report = verify_sets_batch(d, v.point, 100, 20240607, 10, 100);
      EXPECT_TRUE(report.violations.empty());
      EXPECT_LE(report.worst_ratio_log, 1e-12);
    }
  }
}

TEST(Samplers, DeterministicAndBounded) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto a = sample_point_set(3, 7, i, 10, 100);
    const auto b = sample_point_set(3, 7, i, 10, 100);
    EXPECT_EQ(a.points(), b.points());
    EXPECT_GE(a.size(), 1u);
    EXPECT_LE(a.size(), 100u);
    for (const auto& p : a.points())
      for (auto x : p) EXPECT_LE(std::abs(x), 10);
  }
}

TEST(FunctionForm, IndicatorsReduceToSetForm) {
  const auto mm = fixtures::matmul();
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto e = sample_point_set(3, 406, i, 4, 30);
    std::vector<FunctionTable> f(3);
    for (std::size_t j = 0; j < 3; ++j)
      for (const auto& x : e.points()) {
        Point y;
        for (const auto& v : detail::apply_map(mm.map(j), x)) y.push_back(v.get_num().get_si());
        f[j].set(y, 1);
      }
    const auto c = verify_function_inequality(mm, q({"1/2", "1/2", "1/2"}), f, 1e-9);
    EXPECT_TRUE(c.holds);
    EXPECT_GE(c.lhs, static_cast<double>(e.size()));
  }
}

TEST(FunctionForm, SingleInjectiveMapIsEquality) {
  const HblDatum d(2, {RationalMatrix::identity(2)});
  FunctionTable f;
  f.set({0, 1}, Rational(3, 2));
  f.set({4, -2}, 2);
  const auto c = verify_function_inequality(d, q({"1"}), std::vector<FunctionTable>{f}, 1e-12);
  EXPECT_TRUE(c.holds);
  EXPECT_DOUBLE_EQ(c.lhs, 3.5);
  EXPECT_DOUBLE_EQ(c.rhs, 3.5);
}

TEST(FunctionForm, SumMatchesBoxScan) {
  const auto mm = fixtures::matmul();
  for (std::uint64_t i = 0; i < 25; ++i) {
    const auto f = sample_function_tables(mm, 407, i);
    const auto c = verify_function_inequality(mm, q({"1/2", "1/2", "1/2"}), f, 1e-9);
    EXPECT_NEAR(c.lhs, naive_lhs(mm, f, 6), 1e-9 * std::max(1.0, c.lhs));
    EXPECT_TRUE(c.holds);
  }
}

TEST(FunctionForm, SupremumNormForZeroExponent) {
  const HblDatum d(1, {RationalMatrix::identity(1), RationalMatrix::identity(1)});
  FunctionTable f, g;
  f.set({0}, 1);
  f.set({1}, 1);
  g.set({0}, 5);
  g.set({1}, 3);
  const auto c = verify_function_inequality(d, q({"1", "0"}), std::vector<FunctionTable>{f, g}, 1e-12);
  EXPECT_DOUBLE_EQ(c.rhs, 10);
  EXPECT_DOUBLE_EQ(c.lhs, 8);
  EXPECT_TRUE(c.holds);
}

TEST(FunctionForm, SharedKernelIsUnsupported) {
  const HblDatum d(2, {RationalMatrix::from_ints({{1, 0}}), RationalMatrix::from_ints({{2, 0}})});
  FunctionTable f;
  f.set({0}, 1);
  EXPECT_THROW(verify_function_inequality(d, q({"1", "1"}), std::vector<FunctionTable>{f, f}, 1e-9),
               UnsupportedInstance);
}

TEST(FunctionForm, BatchOnMatmulCenter) {
  const auto report = verify_functions_batch(fixtures::matmul(), q({"1/2", "1/2", "1/2"}), 200, 20240607, 1e-9);
  EXPECT_TRUE(report.violations.empty());
}
