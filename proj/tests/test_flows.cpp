#include <gtest/gtest.h>

#include "liejet/diffeo.hpp"
#include "liejet/estimates.hpp"
#include "liejet/radial.hpp"
#include "test_util.hpp"

using namespace liejet;
using testutil::random_field;

namespace {

FormalDiffeo random_diffeo(std::mt19937_64& rng, int nu, int trunc, int terms) {
  FormalDiffeo id = FormalDiffeo::identity(nu, trunc);
  std::vector<Poly> comps(id.components());
  std::uniform_int_distribution<int> comp(0, nu - 1);
  std::uniform_int_distribution<int> deg(2, trunc);
  for (int t = 0; t < terms; ++t) {
    int d = deg(rng);
    auto idx = multi_indices_of_degree(nu, d);
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    comps[static_cast<std::size_t>(comp(rng))].add_term(idx[pick(rng)], testutil::random_rat(rng));
  }
  return FormalDiffeo(std::move(comps));
}

Poly poly_1d(int trunc, std::initializer_list<std::pair<int, Rat>> coeffs) {
  Poly p(1, trunc);
  for (const auto& [deg, c] : coeffs) p.add_term(MultiIndex{static_cast<unsigned>(deg)}, c);
  return p;
}

}  // namespace

TEST(Compose, IdentityNeutral) {
  std::mt19937_64 rng(3);
  auto psi = random_diffeo(rng, 2, 8, 6);
  auto id = FormalDiffeo::identity(2, 8);
  EXPECT_EQ(compose(id, psi), psi);
  EXPECT_EQ(compose(psi, id), psi);
}

TEST(Compose, WorkedExample) {
  // Phi = x + x^2, Psi = x + x^3, N = 4: Phi(Psi) = x + x^2 + x^3 + 2x^4
  FormalDiffeo phi({poly_1d(4, {{1, Rat(1)}, {2, Rat(1)}})});
  FormalDiffeo psi({poly_1d(4, {{1, Rat(1)}, {3, Rat(1)}})});
  FormalDiffeo expected({poly_1d(4, {{1, Rat(1)}, {2, Rat(1)}, {3, Rat(1)}, {4, Rat(2)}})});
  EXPECT_EQ(compose(phi, psi), expected);
}

TEST(Compose, Associative) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 2);
    auto a = random_diffeo(rng, nu, 8, 4);
    auto b = random_diffeo(rng, nu, 8, 4);
    auto c = random_diffeo(rng, nu, 8, 4);
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
  }
}

TEST(Compose, NonIdentityLinearPartAccepted) {
  Poly p(1, 4);
  p.add_term(MultiIndex{1u}, Rat(2));
  FormalDiffeo scale({p});
  auto sq = compose(scale, scale);
  EXPECT_EQ(sq.component(0).coeff(MultiIndex{1u}), Rat(4));
}

TEST(Diffeo, MustFixOrigin) {
  Poly p(1, 4);
  p.add_term(MultiIndex{0u}, Rat(1));
  EXPECT_THROW(FormalDiffeo({p}), std::invalid_argument);
}

TEST(Inverse, RoundTrip) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 2);
    auto phi = random_diffeo(rng, nu, 8, 5);
    auto inv = inverse(phi);
    auto id = FormalDiffeo::identity(nu, 8);
    EXPECT_EQ(compose(phi, inv), id);
    EXPECT_EQ(compose(inv, phi), id);
  }
}

TEST(ExpField, ZeroGivesIdentity) {
  FormalVectorField zero(2, 6);
  EXPECT_EQ(exp_field(zero, 6), FormalDiffeo::identity(2, 6));
}

TEST(ExpField, GeometricFlow) {
  // time-1 flow of xdot = x^2 is x/(1-x); truncated: x + x^2 + ... + x^5
  FormalVectorField x(1, 5);
  x.add_term(0, MultiIndex{2u}, Rat(1));
  FormalDiffeo expected({poly_1d(5, {{1, Rat(1)}, {2, Rat(1)}, {3, Rat(1)}, {4, Rat(1)}, {5, Rat(1)}})});
  EXPECT_EQ(exp_field(x, 5), expected);
}

TEST(ExpField, RejectsLowFiltrationOrder) {
  FormalVectorField linear(1, 5);
  linear.add_term(0, MultiIndex{1u}, Rat(1));
  EXPECT_THROW(exp_field(linear, 5), std::invalid_argument);
  FormalVectorField constant(1, 5);
  constant.add_term(0, MultiIndex{0u}, Rat(1));
  EXPECT_THROW(exp_field(constant, 5), std::invalid_argument);
}

TEST(ExpField, GroupInverse) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 3);
    auto x = random_field(rng, nu, 8, 2, 4);
    EXPECT_EQ(compose(exp_field(x, 8), exp_field(-x, 8)), FormalDiffeo::identity(nu, 8));
  }
}

TEST(ExpField, LinearPartAndLeadingTerm) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 6; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 2);
    auto x = random_field(rng, nu, 9, 3, 3);
    if (x.is_zero()) continue;
    auto e = exp_field(x, 9);
    EXPECT_TRUE(e.has_identity_linear_part());
    int lead = x.filtration_order() + 1;
    FormalVectorField diff = id_minus(e);  // id - Exp X = -X + higher order
    EXPECT_EQ(diff.homogeneous_part(lead), -x.homogeneous_part(lead));
  }
}

TEST(ExpField, FlowProperty) {
  std::mt19937_64 rng(59);
  Rat s(2, 3), t(1, 2);
  for (int trial = 0; trial < 5; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 2);
    auto x = random_field(rng, nu, 8, 2, 4);
    EXPECT_EQ(exp_field((s + t) * x, 8), compose(exp_field(s * x, 8), exp_field(t * x, 8)));
  }
}

TEST(OneMinusThenExp, ZeroField) {
  FormalVectorField zero(2, 6);
  EXPECT_EQ(one_minus_then_exp(zero), FormalDiffeo::identity(2, 6));
}

TEST(OneMinusThenExp, WorkedExample1d) {
  // X = x^2 d_x, N = 4: both routes give x - x^3 - 2x^4
  FormalVectorField x(1, 4);
  x.add_term(0, MultiIndex{2u}, Rat(1));
  FormalDiffeo expected({poly_1d(4, {{1, Rat(1)}, {3, Rat(-1)}, {4, Rat(-2)}})});
  EXPECT_EQ(one_minus_then_exp(x), expected);
  EXPECT_EQ(one_minus_exp_series(x), expected);
}

TEST(OneMinusThenExp, SeriesIdentity) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    int nu = 1 + static_cast<int>(rng() % 3);
    auto x = random_field(rng, nu, 10, 2, 5);
    EXPECT_EQ(one_minus_then_exp(x), one_minus_exp_series(x));
  }
}

TEST(OneMinusThenExp, LeadingCorrectionDegree) {
  std::mt19937_64 rng(71);
  for (int p : {1, 2, 3}) {
    auto x = random_field(rng, 2, 10, p + 1, 4).homogeneous_part(p + 1);
    if (x.is_zero()) continue;
    // id - (id - X) o Exp X = sum_{k>=1} (k/(k+1)!) X^(k+1): starts at 2p+1
    FormalVectorField w = id_minus(one_minus_then_exp(x));
    EXPECT_GE(w.min_degree(), 2 * p + 1);
  }
}

TEST(ApplySeriesTail, ZeroField) {
  FormalVectorField zero(1, 6);
  EXPECT_TRUE(apply_series_tail(zero, 6).is_zero());
}

TEST(ApplySeriesTail, BruteForcePowers1d) {
  // X = x^3 d_x, N = 9: sum_{k>=1} X^(k+1)(x)/k! = 3x^5 + (15/2)x^7 + (35/2)x^9
  FormalVectorField x(1, 9);
  x.add_term(0, MultiIndex{3u}, Rat(1));
  auto tail = apply_series_tail(x, 9);
  EXPECT_EQ(tail.coeff(0, MultiIndex{5u}), Rat(3));
  EXPECT_EQ(tail.coeff(0, MultiIndex{7u}), Rat(15, 2));
  EXPECT_EQ(tail.coeff(0, MultiIndex{9u}), Rat(35, 2));

  // brute force from explicit iterated applications
  FormalVectorField coords(1, 9);
  coords.add_term(0, MultiIndex{1u}, Rat(1));
  FormalVectorField power = apply(x, coords);  // X^1(x)
  FormalVectorField acc(1, 9);
  Rat kfac(1);
  for (int k = 1; k <= 9; ++k) {
    power = apply(x, power);  // X^(k+1)(x)
    kfac *= (k == 1) ? Rat(1) : Rat(k);
    acc = acc + Rat(1) / kfac * power;
  }
  EXPECT_EQ(acc, tail);
}

TEST(ApplySeriesTail, CanonicalBound) {
  // Corollary 2 tail bound at sigma*rho for the canonical field
  for (int nu : {1, 2}) {
    int n = 3, trunc = nu == 1 ? 40 : 20;
    double M = 1.0, sigma = 5.0;
    double q = q_ratio(nu, n, M, sigma);
    ASSERT_LT(q, 1.0);
    auto x = expand(canonical_field(nu, Rat(1), Rat(1), n, trunc));
    auto tail = apply_series_tail(x, trunc);
    double measured = rat_to_double(banach_norm(tail, Rat(5), 1));
    EXPECT_LE(measured, tail_sum_bound(M, n, sigma, nu) * (1 + 1e-9));
  }
}
