#include <gtest/gtest.h>

#include <random>

#include "liejet/linalg.hpp"

using namespace liejet;

namespace {

RatMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  RatMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (int v : row) m(i, j++) = Rat(v);
    ++i;
  }
  return m;
}

}  // namespace

TEST(Rref, PivotsAndRank) {
  auto m = from_rows({{0, 2, 4}, {1, 1, 1}, {1, 3, 5}});
  auto rr = rref(m);
  EXPECT_EQ(rr.rank, 2u);
  ASSERT_EQ(rr.pivot_cols.size(), 2u);
  EXPECT_EQ(rr.pivot_cols[0], 0u);
  EXPECT_EQ(rr.pivot_cols[1], 1u);
  // reduced rows: x + 0y - z, y + 2z
  EXPECT_EQ(rr.m(0, 2), Rat(-1));
  EXPECT_EQ(rr.m(1, 2), Rat(2));
}

TEST(Kernel, NormalizedBasis) {
  auto m = from_rows({{1, 2, 3}});
  auto basis = kernel_basis(m);
  ASSERT_EQ(basis.size(), 2u);
  // each vector's first nonzero entry is 1
  for (const auto& v : basis) {
    auto r = m.multiply(v);
    for (const auto& x : r) EXPECT_EQ(x, Rat(0));
    for (const auto& x : v) {
      if (x == 0) continue;
      EXPECT_EQ(x, Rat(1));
      break;
    }
  }
  EXPECT_TRUE(kernel_basis(RatMatrix::identity(3)).empty());
}

TEST(Solve, ParticularZeroesFreeVariables) {
  auto m = from_rows({{1, 1, 0}, {0, 0, 1}});
  RatVec b{Rat(3), Rat(5)};
  auto sol = solve(m, b);
  ASSERT_TRUE(sol.consistent);
  EXPECT_EQ(sol.particular, (RatVec{Rat(3), Rat(0), Rat(5)}));
  ASSERT_EQ(sol.kernel.size(), 1u);
  EXPECT_EQ(sol.kernel[0], (RatVec{Rat(1), Rat(-1), Rat(0)}));
}

TEST(Solve, DetectsInconsistency) {
  auto m = from_rows({{1, 1}, {2, 2}});
  auto sol = solve(m, RatVec{Rat(1), Rat(3)});
  EXPECT_FALSE(sol.consistent);
  EXPECT_FALSE(sol.failing_rows.empty());
}

TEST(Solve, RandomResidualCheck) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
    RatMatrix a(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a(i, j) = Rat(val(rng));
    RatVec x(c);
    for (auto& v : x) v = Rat(val(rng), 3), v.canonicalize();
    RatVec b = a.multiply(x);
    auto sol = solve(a, b);
    ASSERT_TRUE(sol.consistent);
    EXPECT_EQ(a.multiply(sol.particular), b);
    for (const auto& k : sol.kernel) {
      auto z = a.multiply(k);
      for (const auto& v : z) EXPECT_EQ(v, Rat(0));
    }
    // rank-nullity
    EXPECT_EQ(rref(a).rank + sol.kernel.size(), c);
  }
}

TEST(Solve, Determinism) {
  auto m = from_rows({{2, 4, 6, 1}, {1, 2, 3, 0}});
  auto s1 = solve(m, RatVec{Rat(2), Rat(1)});
  auto s2 = solve(m, RatVec{Rat(2), Rat(1)});
  EXPECT_EQ(s1.particular, s2.particular);
  EXPECT_EQ(s1.kernel, s2.kernel);
}
