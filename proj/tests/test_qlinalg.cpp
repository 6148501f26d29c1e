#include <gtest/gtest.h>

#include <random>

#include "opf/qlinalg.hpp"

using namespace opf;

namespace {

SparseMatrix dense(const std::vector<std::vector<long>>& rows) {
  std::vector<Vec> v;
  for (const auto& r : rows) {
    Vec x;
    for (long a : r) x.emplace_back(a);
    v.push_back(x);
  }
  return SparseMatrix::from_dense(v, rows.empty() ? 0 : rows[0].size());
}

// Naive rank by fraction-free elimination on a dense copy; an oracle
// independent of the sparse code paths.
std::size_t naive_rank(std::vector<Vec> a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST(QLinalg, RationalsStayReduced) {
  Rational a(6, 4);
  a.canonicalize();
  EXPECT_EQ(to_fraction_string(a), "3/2");
  EXPECT_EQ(to_fraction_string(Rational(-2)), "-2/1");
  EXPECT_EQ(parse_rational("-4/6"), Rational(-2, 3));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(QLinalg, RankOfSmallMatrices) {
  EXPECT_EQ(rank(dense({{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(rank(dense({{1, 0}, {0, 1}})), 2u);
  EXPECT_EQ(rank(SparseMatrix(3, 0)), 0u);
  EXPECT_EQ(rank(SparseMatrix(0, 3)), 0u);
}

TEST(QLinalg, KernelOfRankOneMatrix) {
  auto k = kernel_basis(dense({{1, 1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0][0], Rational(1));
  EXPECT_EQ(k[0][1], Rational(-1));
}

TEST(QLinalg, SpanMembershipAndQuotient) {
  std::vector<Vec> vs{{1, 0, 1}, {0, 1, 1}};
  EXPECT_TRUE(in_span(vs, {1, 1, 2}));
  EXPECT_FALSE(in_span(vs, {1, 1, 1}));
  EXPECT_EQ(quotient_dim(3, vs), 1u);
}

TEST(QLinalg, EchelonReducesAgainstPivots) {
  Echelon e(3);
  EXPECT_TRUE(e.insert({{0, 1}, {2, 1}}));
  EXPECT_FALSE(e.insert({{0, 2}, {2, 2}}));
  EXPECT_TRUE(e.contains({{0, 3}, {2, 3}}));
  EXPECT_EQ(e.reduce({{0, 1}}), (SparseVec{{2, -1}}));
  Echelon last(3, Echelon::PivotRule::Last);
  last.insert({{0, 1}, {2, 1}});
  EXPECT_TRUE(last.is_pivot(2));
  EXPECT_EQ(last.reduce({{2, 1}}), (SparseVec{{0, -1}}));
}

TEST(QLinalg, MultiplyTransposeRestrict) {
  SparseMatrix a = dense({{1, 2}, {3, 4}});
  SparseMatrix b = dense({{0, 1}, {1, 0}});
  EXPECT_EQ(multiply(a, b), dense({{2, 1}, {4, 3}}));
  EXPECT_EQ(a.transpose(), dense({{1, 3}, {2, 4}}));
  EXPECT_EQ(a.restrict({1}, {0}), dense({{3}}));
  EXPECT_TRUE(add(a, dense({{-1, -2}, {-3, -4}})).is_zero());
  EXPECT_THROW(multiply(a, SparseMatrix(3, 1)), std::invalid_argument);
}

TEST(QLinalg, RankAgreesWithDenseOracle) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
    std::vector<Vec> rows(r, Vec(c));
    for (auto& row : rows)
      for (auto& x : row) {
        x = 0;
        if (rng() % 3 == 0) {
          x = Rational(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3);
          x.canonicalize();
        }
      }
    // Force some dependencies.
    if (r > 2) rows[r - 1] = rows[0];
    SparseMatrix m = SparseMatrix::from_dense(rows, c);
    const std::size_t expected = naive_rank(rows);
    ASSERT_EQ(rank(m), expected);
    auto k = kernel_basis(m);
    ASSERT_EQ(k.size(), c - expected);
    for (const auto& v : k) ASSERT_TRUE(opf::apply(m, to_sparse(v)).empty());
  }
}

TEST(QLinalg, LargeSparseRankUsesEchelon) {
  // 100 x 100 bidiagonal matrix of rank 99 (a path boundary).
  SparseMatrix m(100, 100);
  for (std::size_t i = 0; i + 1 < 100; ++i) {
    m.set(i, i, 1);
    m.set(i + 1, i, -1);
  }
  EXPECT_EQ(rank(m), 99u);
}
