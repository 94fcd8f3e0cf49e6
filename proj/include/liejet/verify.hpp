#ifndef LIEJET_VERIFY_HPP
#define LIEJET_VERIFY_HPP

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "liejet/builtin.hpp"
#include "liejet/estimates.hpp"
#include "liejet/factorization.hpp"
#include "liejet/radial.hpp"

namespace liejet {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace verify_detail {

inline FormalVectorField random_field(std::mt19937_64& rng, int nu, int trunc, int min_deg, int terms) {
  FormalVectorField v(nu, trunc);
  std::uniform_int_distribution<int> comp(0, nu - 1);
  std::uniform_int_distribution<int> deg(min_deg, trunc);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  for (int t = 0; t < terms; ++t) {
    int d = deg(rng);
    auto idx = multi_indices_of_degree(nu, d);
    Rat c(num(rng), den(rng));
    c.canonicalize();
    v.add_term(comp(rng), idx[rng() % idx.size()], c);
  }
  return v;
}

}  // namespace verify_detail

// The built-in invariant suite: one entry per named check, all exact unless
// stated otherwise. Exit-code policy is the caller's business.
inline std::vector<CheckResult> run_builtin_suite() {
  std::vector<CheckResult> results;
  auto check = [&](const std::string& name, const std::function<bool(std::string&)>& fn) {
    CheckResult r;
    r.name = name;
    try {
      r.passed = fn(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  };

  check("series identity (id - X) o Exp X", [](std::string& detail) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
      int nu = 1 + static_cast<int>(rng() % 2);
      auto x = verify_detail::random_field(rng, nu, 8, 2, 4);
      if (one_minus_then_exp(x) != one_minus_exp_series(x)) {
        detail = "mismatch at trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  });

  check("radial algebra matches multivariate apply", [](std::string& detail) {
    std::mt19937_64 rng(2);
    for (int nu : {1, 2, 3}) {
      RadialField x(nu, 10), y(nu, 10);
      for (int t = 0; t < 3; ++t) {
        x.add_term(1 + static_cast<int>(rng() % 8), Rat(1 + static_cast<int>(rng() % 5)));
        y.add_term(1 + static_cast<int>(rng() % 8), Rat(1 + static_cast<int>(rng() % 5)));
      }
      if (expand(radial_apply(x, y)) != apply(expand(x), expand(y))) {
        detail = "nu = " + std::to_string(nu);
        return false;
      }
    }
    return true;
  });

  check("iterated majorant estimate", [](std::string& detail) {
    for (int n : {2, 3}) {
      for (int k : {1, 2, 3}) {
        for (int nu : {1, 2}) {
          RadialField x = canonical_field(nu, Rat(1), Rat(1), n, 24);
          RadialField y = RadialField::geometric(nu, 24, Rat(1), Rat(1), 2, 1);  // r = 1, alpha = 1
          RadialField lhs = y;
          for (int j = 0; j < k; ++j) lhs = radial_apply(x, lhs);
          Rat prod(1);
          for (int j = 0; j < k; ++j) prod *= Rat(j * n + 2);
          RadialField rhs =
              RadialField::geometric(nu, 24, rat_pow(Rat(nu), k) * prod, Rat(1), k * n + 2, 1 + 2 * k);
          if (!majorizes(rhs, lhs)) {
            detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " nu=" + std::to_string(nu);
            return false;
          }
        }
      }
    }
    return true;
  });

  check("integer-max bound of Lemma form", [](std::string& detail) {
    for (int alpha = 1; alpha <= 8; ++alpha) {
      for (double sigma : {1.5, 2.0, 3.0}) {
        double best = 0;
        for (int m = 0; m <= 500; ++m) best = std::max(best, std::pow(m, alpha) * std::pow(sigma, -m));
        if (lemma3_bound(alpha, sigma) * (1 + 1e-12) < best) {
          detail = "alpha=" + std::to_string(alpha);
          return false;
        }
      }
    }
    return true;
  });

  check("Lambert W round-trip", [](std::string& detail) {
    for (int i = 0; i <= 200; ++i) {
      double z = std::pow(10.0, -4.0 + 8.0 * i / 200.0);
      double w = lambert_w(z);
      if (std::abs(w * std::exp(w) - z) > 1e-12 * std::max(1.0, z)) {
        detail = "z = " + std::to_string(z);
        return false;
      }
    }
    return true;
  });

  check("convergence schedule", [](std::string& detail) {
    auto rep = schedule(4, 1.0, 1.0, 1, 15);
    double cap = 1.0;
    for (const auto& st : rep.states) {
      if (st.sigma <= 1.0 || st.M > cap * (1 + 1e-12)) {
        detail = "step " + std::to_string(st.step);
        return false;
      }
      cap *= 2.5;
    }
    return rep.converged && std::isfinite(rep.rho_limit);
  });

  check("Cauchy-Riemann filtered basis", [](std::string& detail) {
    auto s = builtin::cauchy_riemann();
    auto basis = build_filtered_basis(s, 4, 8);
    std::map<int, int> count;
    for (const auto& f : basis) {
      count[f.leading_degree()]++;
      if (!residual_is_zero(s, f, 7)) {
        detail = "nonzero residual";
        return false;
      }
    }
    for (int d = 0; d <= 4; ++d)
      if (count[d] != 2) {
        detail = "leading degree " + std::to_string(d) + " has " + std::to_string(count[d]) + " elements";
        return false;
      }
    return true;
  });

  check("divergence-free kernel dimensions", [](std::string& detail) {
    auto s = builtin::divergence_free_2d();
    for (int l = 1; l <= 5; ++l) {
      if (seeds_at_degree(s, l).size() != static_cast<std::size_t>(l + 2)) {
        detail = "degree " + std::to_string(l);
        return false;
      }
    }
    return true;
  });

  check("strong boundedness of the Gaussian ODE", [](std::string& detail) {
    auto s = builtin::gaussian_ode();
    FormalSolution seed(1, 1, 1);
    seed.set_coeff(MultiIndex(1), RatVec{Rat(1)});
    auto f = prolong(s, [&] {
      FormalSolution g(1, 1, 16);
      g.set_coeff(MultiIndex(1), RatVec{Rat(1)});
      return g;
    }(), 0, 16);
    MalgrangeConfig cfg;
    cfg.rho0 = Rat(1);
    cfg.M = fit_coefficient_bound(s, cfg.rho0);
    cfg.r0 = Rat(1, 2);
    cfg.C = estimate_c(s, {seed}, 16, cfg.r0).C;
    Rat K = malgrange_K(cfg, s.q_dep());
    auto rep = strong_boundedness_check(f, K, 0);
    if (!rep.holds) {
      detail = "violation at k = " + std::to_string(rep.first_violation);
      return false;
    }
    auto phi = phi_sequence(cfg, s.q_dep(), {malgrange_norm_at(f, 0)}, 16);
    for (int l = 0; l <= 16; ++l)
      if (malgrange_norm_at(f, l) > phi[static_cast<std::size_t>(l)]) {
        detail = "phi fails to dominate at l = " + std::to_string(l);
        return false;
      }
    return true;
  });

  check("factorization round-trip over the flat basis", [](std::string& detail) {
    std::mt19937_64 rng(7);
    for (int nu : {1, 2}) {
      auto basis = FilteredBasis::flat_monomial(nu, 8, 8);
      for (int trial = 0; trial < 3; ++trial) {
        FormalDiffeo id = FormalDiffeo::identity(nu, 8);
        std::vector<Poly> comps(id.components());
        for (int t = 0; t < 5; ++t) {
          int d = 2 + static_cast<int>(rng() % 7);
          auto idx = multi_indices_of_degree(nu, d);
          Rat c(static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 3));
          c.canonicalize();
          comps[rng() % static_cast<std::size_t>(nu)].add_term(idx[rng() % idx.size()], c);
        }
        FormalDiffeo phi(comps);
        auto res = factorize(phi, basis, 8);
        if (reconstruct(res.factors, 8) != phi) {
          detail = "nu = " + std::to_string(nu);
          return false;
        }
      }
    }
    return true;
  });

  check("split bounds at rho = 4", [](std::string& detail) {
    std::mt19937_64 rng(11);
    auto basis = FilteredBasis::flat_monomial(2, 8, 8);
    for (int trial = 0; trial < 5; ++trial) {
      FormalVectorField z(2, 8);
      for (int k = 2; k <= 8; ++k) {
        Rat cap = rat_pow(Rat(4), k - 1);
        Rat kfac(factorial(static_cast<unsigned long>(k)));
        for (const auto& a : multi_indices_of_degree(2, k))
          for (int i = 0; i < 2; ++i) {
            if (rng() % 3) continue;
            Rat w = cap * Rat(static_cast<int>(rng() % 25) - 12, 12);
            w.canonicalize();
            z.add_term(i, a, w * kfac / Rat(a.fact()));
          }
      }
      if (z.is_zero()) continue;
      auto cert = verify_split_bounds(decompose(z, basis), Rat(4), Rat(1));
      if (!cert.ok_X || !cert.ok_Y) {
        detail = "trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  });

  return results;
}

}  // namespace liejet

#endif
