#include <gtest/gtest.h>

#include "liejet/radial.hpp"
#include "liejet/vector_field.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::random_field;
using testutil::random_field_in_ball;
using testutil::random_radial;

namespace {

FormalVectorField field_1d(int trunc, std::initializer_list<std::pair<int, Rat>> coeffs) {
  FormalVectorField v(1, trunc);
  for (const auto& [deg, c] : coeffs) v.add_term(0, MultiIndex{static_cast<unsigned>(deg)}, c);
  return v;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(rat_from_string("3/2"), Rat(3, 2));
  EXPECT_EQ(rat_from_string("-7/2"), Rat(-7, 2));
  EXPECT_EQ(rat_from_string("0.75"), Rat(3, 4));
  EXPECT_EQ(rat_from_string("-0.5"), Rat(-1, 2));
  EXPECT_EQ(rat_from_string("1.5e2"), Rat(150));
  EXPECT_EQ(rat_from_string("25e-2"), Rat(1, 4));
  EXPECT_EQ(rat_to_string(Rat(3, 2)), "3/2");
  EXPECT_EQ(rat_to_string(Rat(-4, 2)), "-2");
  EXPECT_THROW(rat_from_string("x"), std::invalid_argument);
  EXPECT_THROW(rat_from_string("1/0"), std::invalid_argument);
  EXPECT_EQ(rat_pow(Rat(2, 3), 3), Rat(8, 27));
  EXPECT_EQ(rat_pow(Rat(2), -2), Rat(1, 4));
}

TEST(MultiIndex, Basics) {
  MultiIndex a{2, 0, 1};
  EXPECT_EQ(a.order(), 3);
  EXPECT_EQ(a.fact(), Int(2));
  EXPECT_EQ(count_multi_indices(3, 4), 15);
  auto all = multi_indices_of_degree(2, 2);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0], (MultiIndex{2, 0}));
  EXPECT_EQ(all[1], (MultiIndex{1, 1}));
  EXPECT_EQ(all[2], (MultiIndex{0, 2}));
  EXPECT_LT(all[0], all[1]);
  EXPECT_LT(MultiIndex({1, 1}), MultiIndex({2, 1}));  // graded before lex
}

TEST(Poly, Arithmetic) {
  Poly p(2, 4);
  p.add_term(MultiIndex{1, 0}, Rat(1));
  p.add_term(MultiIndex{0, 1}, Rat(2));
  Poly q = p * p;
  EXPECT_EQ(q.coeff(MultiIndex{2, 0}), Rat(1));
  EXPECT_EQ(q.coeff(MultiIndex{1, 1}), Rat(4));
  EXPECT_EQ(q.coeff(MultiIndex{0, 2}), Rat(4));
  EXPECT_EQ((q * q).max_degree(), 4);
  EXPECT_EQ((q * (q * q)).max_degree(), -1);  // degree 6 > truncation
  Poly d = q.derivative(0);
  EXPECT_EQ(d.coeff(MultiIndex{1, 0}), Rat(2));
  EXPECT_EQ(d.coeff(MultiIndex{0, 1}), Rat(4));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(p.min_degree(), 1);
}

TEST(GradedNorm, SpecValues) {
  FormalVectorField zero(2, 6);
  EXPECT_EQ(graded_norm(zero, 2), Rat(0));

  // x^1 x^2 d_1 at degree 2: alpha! = 1, k! = 2.
  FormalVectorField v(2, 6);
  v.add_term(0, MultiIndex{1, 1}, Rat(1));
  EXPECT_EQ(graded_norm(v, 2), Rat(1, 2));

  // expanded radial monomial c xh^m d_xh has graded norm exactly c
  RadialField r(3, 8);
  r.add_term(5, Rat(7, 3));
  EXPECT_EQ(graded_norm(expand(r), 5), Rat(7, 3));
}

TEST(BanachNorm, SpecValues) {
  // canonical field: norm M at scale rho with offset 1, for every truncation
  for (int n : {2, 3}) {
    RadialField x = canonical_field(Rat(5, 2), Rat(1, 3), n, 14);
    EXPECT_EQ(banach_norm(expand(x), Rat(1, 3), 1), Rat(5, 2));
  }
  FormalVectorField zero(1, 4);
  EXPECT_EQ(banach_norm(zero, Rat(2), 1), Rat(0));
  // x^2 d_x at rho = 2: single degree-2 part of graded norm 1
  auto v = field_1d(4, {{2, Rat(1)}});
  EXPECT_EQ(banach_norm(v, Rat(2), 1), Rat(1, 2));
  EXPECT_EQ(banach_norm(v, Rat(2), 0), Rat(1, 4));
  EXPECT_THROW(banach_norm(v, Rat(0), 1), std::domain_error);
  EXPECT_THROW(banach_norm(v, Rat(-1), 1), std::domain_error);
}

TEST(Apply, MonomialProductRule) {
  // X = x^2 d_x applied to Y = x^3 d_x gives 3 x^4 d_x
  auto x = field_1d(8, {{2, Rat(1)}});
  auto y = field_1d(8, {{3, Rat(1)}});
  auto r = apply(x, y);
  EXPECT_EQ(r, field_1d(8, {{4, Rat(3)}}));

  FormalVectorField zero(1, 8);
  EXPECT_TRUE(apply(zero, y).is_zero());

  FormalVectorField other(2, 8);
  EXPECT_THROW(apply(x, other), std::invalid_argument);
}

TEST(Apply, RadialCrossCheck) {
  // xh^2 d applied to xh^3 d in 2 variables: nu * f * g' = 2 * 3 * xh^4
  RadialField x(2, 10), y(2, 10);
  x.add_term(2, Rat(1));
  y.add_term(3, Rat(1));
  RadialField expected(2, 10);
  expected.add_term(4, Rat(6));
  EXPECT_EQ(radial_apply(x, y), expected);
  EXPECT_EQ(apply(expand(x), expand(y)), expand(expected));
}

TEST(Apply, GradingOfPureParts) {
  std::mt19937_64 rng(11);
  for (int nu : {1, 2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      int n = 2, r = 3;
      auto x = random_field(rng, nu, 10, n + 1, 4).homogeneous_part(n + 1);
      auto y = random_field(rng, nu, 10, r + 1, 4).homogeneous_part(r + 1);
      auto z = apply(x, y);
      for (int k = 0; k <= z.max_degree(); ++k) {
        if (k == n + r + 1) continue;
        EXPECT_EQ(graded_norm(z, k), Rat(0));
      }
    }
  }
}

TEST(Bracket, Identities) {
  auto x = field_1d(6, {{1, Rat(1)}});
  auto y = field_1d(6, {{2, Rat(1)}});
  // [x d, x^2 d] = x^2 d
  EXPECT_EQ(bracket(x, y), y);
  EXPECT_TRUE(bracket(y, y).is_zero());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 3);
    auto a = random_field(rng, nu, 8, 1, 4);
    auto b = random_field(rng, nu, 8, 1, 4);
    auto c = random_field(rng, nu, 8, 1, 4);
    auto jacobi = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
    EXPECT_TRUE(jacobi.is_zero());
    EXPECT_TRUE((bracket(a, b) + bracket(b, a)).is_zero());
  }
}

TEST(RadialApply, SpecValues) {
  // f = xh^3, g = xh^2, nu = 3: nu f g' = 3 * xh^3 * 2 xh = 6 xh^4
  RadialField f(3, 10), g(3, 10);
  f.add_term(3, Rat(1));
  g.add_term(2, Rat(1));
  EXPECT_EQ(radial_apply(f, g).coeff(4), Rat(6));

  RadialField zero(3, 10);
  EXPECT_TRUE(radial_apply(f, zero).is_zero());
}

TEST(RadialApply, EquivalenceWithExpandedApply) {
  std::mt19937_64 rng(23);
  for (int nu : {1, 2, 3, 4}) {
    for (int trial = 0; trial < 4; ++trial) {
      auto x = random_radial(rng, nu, 12, 1, 4);
      auto y = random_radial(rng, nu, 12, 1, 4);
      EXPECT_EQ(expand(radial_apply(x, y)), apply(expand(x), expand(y)));
    }
  }
}

TEST(RadialApply, CanonicalSelfApplicationCrossCheck) {
  // truncated expansion of M xh^(n+1)/(1-xh) applied to itself agrees with
  // the full multivariate computation
  for (int nu : {1, 2}) {
    auto x = canonical_field(nu, Rat(2), Rat(1), 2, 12);
    EXPECT_EQ(expand(radial_apply(x, x)), apply(expand(x), expand(x)));
  }
}

TEST(Majorizes, Basics) {
  RadialField p(2, 8);
  p.add_term(2, Rat(1));
  FormalVectorField zero(2, 8);
  EXPECT_TRUE(majorizes(p, zero));

  FormalVectorField big(2, 8);
  big.add_term(0, MultiIndex{2, 0}, Rat(3));  // expanded p has coefficient 2!/2! = 1 there
  EXPECT_FALSE(majorizes(p, big));

  FormalVectorField neg(2, 8);
  neg.add_term(0, MultiIndex{1, 1}, Rat(-2));  // p expanded: 2!/1! = 2
  EXPECT_TRUE(majorizes(p, neg));
}

TEST(Majorizes, CanonicalFieldIsMaximal) {
  std::mt19937_64 rng(5);
  for (int nu : {1, 2}) {
    for (int trial = 0; trial < 10; ++trial) {
      Rat M(3, 2), rho(1, 2);
      auto v = random_field_in_ball(rng, nu, 9, 3, M, rho);
      ASSERT_LE(banach_norm(v, rho, 1), M);
      int qf = v.filtration_order();
      if (v.is_zero()) continue;
      EXPECT_TRUE(majorizes(canonical_field(nu, M, rho, qf, 9), v));
    }
  }
}

TEST(Majorizes, MonotoneUnderApply) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 2);
    auto p = random_radial(rng, nu, 8, 1, 3);
    auto q = random_radial(rng, nu, 8, 1, 3);
    // sample V << P, W << Q by scaling coefficients of the expansions
    FormalVectorField v(nu, 8), w(nu, 8);
    auto pe = expand(p);
    auto qe = expand(q);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int i = 0; i < nu; ++i) {
      for (const auto& [a, c] : pe.component(i).terms()) v.add_term(i, a, c * Rat(num(rng), 3));
      for (const auto& [a, c] : qe.component(i).terms()) w.add_term(i, a, c * Rat(num(rng), 3));
    }
    ASSERT_TRUE(majorizes(p, v));
    ASSERT_TRUE(majorizes(q, w));
    EXPECT_TRUE(majorizes(radial_apply(p, q), apply(v, w)));
  }
}

TEST(CanonicalField, SpecValues) {
  auto x = canonical_field(Rat(1), Rat(1), 2, 4);
  EXPECT_EQ(x.coeff(3), Rat(1));
  EXPECT_EQ(x.coeff(4), Rat(1));
  EXPECT_EQ(x.coeff(5), Rat(0));
  EXPECT_TRUE(canonical_field(Rat(1), Rat(1), 7, 4).is_zero());  // n > truncation
  EXPECT_THROW(canonical_field(Rat(0), Rat(1), 2, 4), std::domain_error);
}

TEST(DilationConjugate, SpecValues) {
  auto v = field_1d(6, {{2, Rat(1)}, {4, Rat(-3)}});
  EXPECT_EQ(dilation_conjugate(v, Rat(1)), v);
  auto w = dilation_conjugate(v, Rat(2));
  EXPECT_EQ(w.coeff(0, MultiIndex{2u}), Rat(2));
  EXPECT_EQ(w.coeff(0, MultiIndex{4u}), Rat(-24));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 2);
    auto a = random_field(rng, nu, 8, 1, 5);
    Rat lambda(3, 2), rho(2);
    // norm scale: |Ad_lambda V|_{lambda rho} = |V|_rho
    EXPECT_EQ(banach_norm(dilation_conjugate(a, lambda), lambda * rho, 1), banach_norm(a, rho, 1));
    // Lie-algebra automorphism
    auto b = random_field(rng, nu, 8, 1, 5);
    EXPECT_EQ(dilation_conjugate(bracket(a, b), lambda),
              bracket(dilation_conjugate(a, lambda), dilation_conjugate(b, lambda)));
  }
}

TEST(FiltrationOrder, Basics) {
  auto v = field_1d(6, {{3, Rat(1)}});
  EXPECT_EQ(v.filtration_order(), 2);
  FormalVectorField zero(1, 6);
  EXPECT_EQ(zero.filtration_order(), 6);
  EXPECT_TRUE(zero.is_zero());
}
