#ifndef LIEJET_DIFFEO_HPP
#define LIEJET_DIFFEO_HPP

#include <vector>

#include "liejet/vector_field.hpp"

namespace liejet {

// Formal local diffeomorphism fixing the origin: nu truncated coordinate
// series with zero constant term.
class FormalDiffeo {
 public:
  FormalDiffeo() : nu_(1), trunc_(0), comps_(1, Poly(1, 0)) {}
  explicit FormalDiffeo(std::vector<Poly> comps)
      : nu_(static_cast<int>(comps.size())), trunc_(comps.at(0).truncation()), comps_(std::move(comps)) {
    for (const auto& c : comps_) {
      if (c.nu() != nu_ || c.truncation() != trunc_)
        throw std::invalid_argument("FormalDiffeo: inconsistent components");
      if (c.coeff(MultiIndex(nu_)) != 0) throw std::invalid_argument("FormalDiffeo: must fix the origin");
    }
  }

  static FormalDiffeo identity(int nu, int trunc) {
    std::vector<Poly> comps;
    comps.reserve(static_cast<std::size_t>(nu));
    for (int i = 0; i < nu; ++i) comps.push_back(Poly::coordinate(nu, trunc, i));
    return FormalDiffeo(std::move(comps));
  }

  int nu() const { return nu_; }
  int truncation() const { return trunc_; }
  const Poly& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }
  const std::vector<Poly>& components() const { return comps_; }

  std::vector<std::vector<Rat>> linear_part() const {
    std::vector<std::vector<Rat>> m(static_cast<std::size_t>(nu_), std::vector<Rat>(static_cast<std::size_t>(nu_)));
    for (int i = 0; i < nu_; ++i)
      for (int j = 0; j < nu_; ++j) m[i][j] = comps_[i].coeff(MultiIndex::unit(nu_, j));
    return m;
  }

  bool has_identity_linear_part() const {
    for (int i = 0; i < nu_; ++i)
      for (int j = 0; j < nu_; ++j)
        if (comps_[static_cast<std::size_t>(i)].coeff(MultiIndex::unit(nu_, j)) != Rat(i == j ? 1 : 0))
          return false;
    return true;
  }

  bool is_identity() const { return *this == identity(nu_, trunc_); }

  bool operator==(const FormalDiffeo& o) const { return nu_ == o.nu_ && comps_ == o.comps_; }

 private:
  int nu_;
  int trunc_;
  std::vector<Poly> comps_;
};

namespace detail {

// Substitutes psi into each outer series; powers of the psi components are
// cached across terms. Requires psi(0) = 0 so degrees only grow.
inline std::vector<Poly> substitute(const std::vector<Poly>& outer, const std::vector<Poly>& psi, int trunc) {
  int nu = static_cast<int>(psi.size());
  std::vector<std::vector<Poly>> powers(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j)
    powers[j].push_back(Poly::monomial(nu, trunc, MultiIndex(nu), Rat(1)));  // psi_j^0 = 1
  auto power = [&](int j, unsigned e) -> const Poly& {
    auto& cache = powers[static_cast<std::size_t>(j)];
    while (cache.size() <= e) cache.push_back(cache.back() * psi[static_cast<std::size_t>(j)]);
    return cache[e];
  };
  std::vector<Poly> out;
  out.reserve(outer.size());
  for (const auto& f : outer) {
    Poly acc(nu, trunc);
    for (const auto& [a, c] : f.terms()) {
      if (a.order() > trunc) break;
      Poly term = Poly::monomial(nu, trunc, MultiIndex(nu), c);
      for (int j = 0; j < nu; ++j)
        if (a[j] > 0) term = term * power(j, a[j]);
      acc += term;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace detail

// (Phi o Psi)(x) = Phi(Psi(x)), truncated at the minimum truncation.
inline FormalDiffeo compose(const FormalDiffeo& phi, const FormalDiffeo& psi) {
  if (phi.nu() != psi.nu()) throw std::invalid_argument("compose: mixed variable counts");
  int n = phi.truncation() < psi.truncation() ? phi.truncation() : psi.truncation();
  return FormalDiffeo(detail::substitute(phi.components(), psi.components(), n));
}

// Degree-by-degree formal inverse; requires the identity linear part.
inline FormalDiffeo inverse(const FormalDiffeo& phi) {
  if (!phi.has_identity_linear_part())
    throw std::invalid_argument("inverse: identity linear part required");
  int n = phi.truncation();
  FormalDiffeo id = FormalDiffeo::identity(phi.nu(), n);
  // F = Phi - id has order >= 2; iterate Psi <- id - F o Psi.
  std::vector<Poly> f;
  f.reserve(phi.components().size());
  for (int i = 0; i < phi.nu(); ++i) f.push_back(phi.component(i) - id.component(i));
  FormalDiffeo psi = id;
  for (int step = 0; step < n; ++step) {
    auto sub = detail::substitute(f, psi.components(), n);
    std::vector<Poly> next;
    next.reserve(sub.size());
    for (int i = 0; i < phi.nu(); ++i) next.push_back(id.component(i) - sub[static_cast<std::size_t>(i)]);
    FormalDiffeo candidate(std::move(next));
    if (candidate == psi) break;
    psi = candidate;
  }
  return psi;
}

// The vector field Z with Phi = id - Z, read off componentwise.
inline FormalVectorField id_minus(const FormalDiffeo& phi) {
  std::vector<Poly> comps;
  comps.reserve(phi.components().size());
  for (int i = 0; i < phi.nu(); ++i)
    comps.push_back(Poly::coordinate(phi.nu(), phi.truncation(), i) - phi.component(i));
  return FormalVectorField(std::move(comps));
}

// The diffeo id - Z.
inline FormalDiffeo id_minus(const FormalVectorField& z) {
  std::vector<Poly> comps;
  comps.reserve(static_cast<std::size_t>(z.nu()));
  for (int i = 0; i < z.nu(); ++i)
    comps.push_back(Poly::coordinate(z.nu(), z.truncation(), i) - z.component(i));
  return FormalDiffeo(std::move(comps));
}

namespace detail {

// Iterated derivation X^k applied to the coordinate functions, k = 0, 1, ...
// Each application raises the minimum degree by at least q_f(X) >= 1, so the
// sequence below the truncation is finite.
inline std::vector<FormalVectorField> lie_series_terms(const FormalVectorField& x, int trunc) {
  if (x.filtration_order() < 1 && !x.is_zero())
    throw std::invalid_argument("lie series: field must have filtration order >= 1");
  std::vector<FormalVectorField> terms;
  FormalVectorField t(x.nu(), trunc);
  for (int i = 0; i < x.nu(); ++i) t.add_term(i, MultiIndex::unit(x.nu(), i), Rat(1));
  terms.push_back(t);
  FormalVectorField xt = x.truncated(trunc);
  while (!terms.back().is_zero()) {
    FormalVectorField next = apply(xt, terms.back());
    if (next.is_zero()) break;
    terms.push_back(std::move(next));
  }
  return terms;
}

}  // namespace detail

// Exp X = sum_k X^k(x)/k!, the time-1 Lie-series flow of X.
inline FormalDiffeo exp_field(const FormalVectorField& x, int trunc) {
  auto terms = detail::lie_series_terms(x, trunc);
  FormalVectorField acc(x.nu(), trunc);
  Rat kfac(1);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k > 0) kfac *= Rat(static_cast<long>(k));
    acc = acc + Rat(1) / kfac * terms[k];
  }
  std::vector<Poly> comps(acc.components());
  return FormalDiffeo(std::move(comps));
}

// (id - X) o Exp X, computed by genuine composition. Coefficient-exactly
// equal to id - sum_{k>=1} (k/(k+1)!) X^(k+1)(x); the dual computation is
// exercised by the tests.
inline FormalDiffeo one_minus_then_exp(const FormalVectorField& x) {
  int n = x.truncation();
  return compose(id_minus(x.truncated(n)), exp_field(x, n));
}

// sum_{k>=1} X^(k+1)(x)/k!, the tail of X o Exp X past X itself.
inline FormalVectorField apply_series_tail(const FormalVectorField& x, int trunc) {
  auto terms = detail::lie_series_terms(x, trunc);
  FormalVectorField acc(x.nu(), trunc);
  Rat kfac(1);
  for (std::size_t k = 1; k + 1 < terms.size(); ++k) {
    kfac *= Rat(static_cast<long>(k));
    acc = acc + Rat(1) / kfac * terms[k + 1];
  }
  return acc;
}

// id - sum_{k>=1} (k/(k+1)!) X^(k+1)(x): the closed series form of
// (id - X) o Exp X.
inline FormalDiffeo one_minus_exp_series(const FormalVectorField& x) {
  int n = x.truncation();
  auto terms = detail::lie_series_terms(x, n);
  FormalVectorField acc(x.nu(), n);
  Rat kp1fac(1);  // (k+1)!
  for (std::size_t k = 1; k + 1 < terms.size(); ++k) {
    kp1fac *= Rat(static_cast<long>(k + 1));
    acc = acc + Rat(static_cast<long>(k)) / kp1fac * terms[k + 1];
  }
  return id_minus(acc);
}

}  // namespace liejet

#endif
