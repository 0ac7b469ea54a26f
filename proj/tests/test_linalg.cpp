#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace hbl;
using fixtures::q;

namespace {

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

}  // namespace

TEST(Rational, ParsesCanonically) {
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("0/5"), Rational(0));
  EXPECT_EQ(to_string(parse_rational("-4/6")), "-2/3");
  EXPECT_EQ(to_string(parse_rational("0")), "0");
}

TEST(Rational, ReportsErrorPositions) {
  try {
    parse_rational_list("1/2,1/x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("position 6"), std::string::npos) << e.what();
  }
  try {
    parse_rational_list("1,2/0");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("position 4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_rational(""), ParseError);
  EXPECT_THROW(parse_rational("1.5"), ParseError);
}

TEST(Rref, Examples) {
  auto r = rref(RationalMatrix::identity(2));
  EXPECT_EQ(r.reduced, RationalMatrix::identity(2));
  EXPECT_EQ(r.rank, 2u);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));

  r = rref(RationalMatrix::from_ints({{1, 2}, {2, 4}}));
  EXPECT_EQ(r.reduced, RationalMatrix::from_ints({{1, 2}, {0, 0}}));
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));

  r = rref(RationalMatrix::from_ints({{0, 1}, {1, 0}}));
  EXPECT_EQ(r.reduced, RationalMatrix::identity(2));
  EXPECT_EQ(r.rank, 2u);
}

TEST(Subspaces, ImageExamples) {
  EXPECT_TRUE(image_subspace(RationalMatrix(3, 3)).is_zero());
  EXPECT_EQ(image_subspace(RationalMatrix::from_ints({{1, 0}, {0, 0}})),
            Subspace::span(RationalMatrix::from_ints({{1, 0}})));
  EXPECT_EQ(image_subspace(RationalMatrix::from_ints({{1, 1}, {1, 1}})),
            Subspace::span(RationalMatrix::from_ints({{1, 1}})));
}

TEST(Subspaces, KernelExamples) {
  EXPECT_TRUE(kernel_subspace(RationalMatrix::identity(2)).is_zero());
  EXPECT_EQ(kernel_subspace(RationalMatrix::from_ints({{1, 0}})),
            Subspace::span(RationalMatrix::from_ints({{0, 1}})));
  const Subspace k = kernel_subspace(RationalMatrix::from_ints({{1, 1, 1}}));
  EXPECT_EQ(k.basis(), RationalMatrix::from_ints({{1, 0, -1}, {0, 1, -1}}));
}

TEST(Subspaces, SumAndIntersectionExamples) {
  const Subspace a = Subspace::span(RationalMatrix::from_ints({{1, 0, 0}, {0, 1, 0}}));
  auto same = sum_and_intersection(a, a);
  EXPECT_EQ(same.sum, a);
  EXPECT_EQ(same.intersection, a);

  auto axes = sum_and_intersection(Subspace::span(RationalMatrix::from_ints({{1, 0}})),
                                   Subspace::span(RationalMatrix::from_ints({{0, 1}})));
  EXPECT_TRUE(axes.sum.is_full());
  EXPECT_TRUE(axes.intersection.is_zero());

  const Subspace b = Subspace::span(RationalMatrix::from_ints({{0, 1, 0}, {0, 0, 1}}));
  auto r = sum_and_intersection(a, b);
  EXPECT_TRUE(r.sum.is_full());
  EXPECT_EQ(r.intersection, Subspace::span(RationalMatrix::from_ints({{0, 1, 0}})));

  EXPECT_THROW(sum_and_intersection(a, Subspace::zero(2)), AmbientMismatch);
}

TEST(Subspaces, ExtendToFullBasisExamples) {
  EXPECT_EQ(extend_to_full_basis(Subspace::zero(2)), RationalMatrix::identity(2));
  EXPECT_EQ(extend_to_full_basis(Subspace::full(2)), RationalMatrix::identity(2));
  EXPECT_EQ(extend_to_full_basis(Subspace::span(RationalMatrix::from_ints({{1, 0, 2}}))),
            RationalMatrix::from_ints({{1, 0, 2}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Subspaces, SolveSquareExamples) {
  EXPECT_EQ(*solve_square(RationalMatrix::identity(2), q({"3", "1/2"})), q({"3", "1/2"}));
  EXPECT_FALSE(solve_square(RationalMatrix::from_ints({{1, 1}, {1, 1}}), q({"1", "2"})));
  EXPECT_EQ(*solve_square(RationalMatrix::from_ints({{2, 0}, {0, 4}}), q({"1", "1"})), q({"1/2", "1/4"}));
}

TEST(Subspaces, FromCanonicalBasisRejectsNonCanonical) {
  EXPECT_THROW(Subspace::from_canonical_basis(RationalMatrix::from_ints({{2, 0}})), PreconditionError);
}

TEST(LinalgProperties, CanonicityUnderRowOperations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 4));
    const std::size_t k = static_cast<std::size_t>(uniform(rng, 1, 4));
    const RationalMatrix b = random_matrix(rng, k, n, 3);
    RationalMatrix u = random_matrix(rng, k, k, 3);
    if (rank(u) != k) continue;
    EXPECT_EQ(Subspace::span(u * b), Subspace::span(b));
  }
}

TEST(LinalgProperties, RankNullity) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_matrix(rng, uniform(rng, 0, 4), uniform(rng, 0, 5), 2);
    EXPECT_EQ(rank(m) + kernel_subspace(m).dim(), m.cols());
    for (std::size_t i = 0; i < kernel_subspace(m).dim(); ++i) {
      const auto v = m.apply(kernel_subspace(m).basis().row(i));
      for (const auto& x : v) EXPECT_EQ(x, 0);
    }
  }
}

TEST(LinalgProperties, ModularLawOfDimensions) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 5));
    const Subspace a = Subspace::span(random_matrix(rng, uniform(rng, 0, 3), n, 2));
    const Subspace b = Subspace::span(random_matrix(rng, uniform(rng, 0, 3), n, 2));
    const auto r = sum_and_intersection(a, b);
    EXPECT_EQ(a.dim() + b.dim(), r.sum.dim() + r.intersection.dim());
    EXPECT_TRUE(a.contains(r.intersection));
    EXPECT_TRUE(b.contains(r.intersection));
    EXPECT_TRUE(r.sum.contains(a));
  }
}

TEST(LinalgProperties, RrefIdempotentAndSolveExact) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_matrix(rng, uniform(rng, 1, 4), uniform(rng, 1, 4), 3);
    const auto r = rref(m);
    EXPECT_EQ(rref(r.reduced).reduced, r.reduced);
    EXPECT_EQ(r.rank, oracle::rank(fixtures::to_oracle(m)));

    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 4));
    const auto a = random_matrix(rng, n, n, 3);
    std::vector<Rational> b(n);
    for (auto& x : b) x = uniform(rng, -5, 5);
    if (auto x = solve_square(a, b)) {
      EXPECT_EQ(a.apply(*x), b);
    } else {
      EXPECT_LT(rank(a), n);
    }
  }
}

TEST(LinalgProperties, IntegerEliminationMatchesRref) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = static_cast<std::size_t>(uniform(rng, 1, 4));
    const std::size_t cols = static_cast<std::size_t>(uniform(rng, 1, 4));
    std::vector<std::int64_t> a(rows * cols);
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = uniform(rng, -4, 4);
      m(i / cols, i % cols) = a[i];
    }
    const auto r = rref(m);
    EXPECT_EQ(detail::int_rank(a, rows, cols), r.rank);
    auto piv = detail::int_gauss_jordan(a, rows, cols);
    ASSERT_TRUE(piv);
    EXPECT_EQ(*piv, r.pivots);
    for (std::size_t i = 0; i < r.rank; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        EXPECT_EQ(make_rational(a[i * cols + j], a[i * cols + (*piv)[i]]), r.reduced(i, j));
  }
}
