#ifndef LIEJET_RADIAL_HPP
#define LIEJET_RADIAL_HPP

#include <map>
#include <stdexcept>

#include "liejet/vector_field.hpp"

namespace liejet {

// Field of the form f(xh) d_xh where xh = x^1 + ... + x^nu and d_xh is the
// sum of the partials. Coefficients are kept non-negative: this is the
// majorant algebra of the canonical-field calculus.
class RadialField {
 public:
  RadialField(int nu, int trunc) : nu_(nu), trunc_(trunc) {
    if (nu < 1) throw std::invalid_argument("RadialField: nu must be >= 1");
  }

  int nu() const { return nu_; }
  int truncation() const { return trunc_; }
  const std::map<int, Rat>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Rat coeff(int m) const {
    auto it = c_.find(m);
    return it == c_.end() ? Rat(0) : it->second;
  }

  void add_term(int m, const Rat& c) {
    if (c == 0 || m > trunc_) return;
    if (c < 0) throw std::invalid_argument("RadialField: negative coefficient");
    auto [it, inserted] = c_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  RadialField& operator+=(const RadialField& o) {
    if (o.trunc_ < trunc_) {
      trunc_ = o.trunc_;
      c_.erase(c_.upper_bound(trunc_), c_.end());
    }
    for (const auto& [m, c] : o.c_) add_term(m, c);
    return *this;
  }
  friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
  friend RadialField operator*(const Rat& s, RadialField f) {
    if (s < 0) throw std::invalid_argument("RadialField: negative scale");
    if (s == 0) f.c_.clear();
    for (auto& [m, c] : f.c_) c *= s;
    return f;
  }

  // c * xh^lead / (1 - rho*xh)^pow expanded up to the truncation.
  // pow = 0 means the bare monomial c * xh^lead.
  static RadialField geometric(int nu, int trunc, const Rat& c, const Rat& rho, int lead, int pow) {
    RadialField f(nu, trunc);
    if (pow == 0) {
      f.add_term(lead, c);
      return f;
    }
    for (int m = 0; lead + m <= trunc; ++m)
      f.add_term(lead + m, c * Rat(binomial(static_cast<unsigned long>(m + pow - 1),
                                             static_cast<unsigned long>(pow - 1))) *
                               rat_pow(rho, m));
    return f;
  }

  bool operator==(const RadialField& o) const { return nu_ == o.nu_ && c_ == o.c_; }

 private:
  int nu_;
  int trunc_;
  std::map<int, Rat> c_;
};

// (f d_xh)(g d_xh) = nu * f * g' * d_xh with the univariate derivative in xh.
inline RadialField radial_apply(const RadialField& x, const RadialField& y) {
  if (x.nu() != y.nu()) throw std::invalid_argument("radial_apply: mixed variable counts");
  int n = x.truncation() < y.truncation() ? x.truncation() : y.truncation();
  RadialField r(x.nu(), n);
  for (const auto& [a, ca] : x.coeffs()) {
    for (const auto& [b, cb] : y.coeffs()) {
      if (b == 0) continue;
      if (a + b - 1 > n) break;
      r.add_term(a + b - 1, Rat(x.nu()) * ca * cb * Rat(b));
    }
  }
  return r;
}

// Expansion into the full multivariate representative:
// c_m xh^m d_xh has v^i_alpha = c_m * m!/alpha! for every |alpha| = m and i.
inline FormalVectorField expand(const RadialField& f) {
  FormalVectorField v(f.nu(), f.truncation());
  for (const auto& [m, c] : f.coeffs()) {
    Rat mfac(factorial(static_cast<unsigned long>(m)));
    for_each_multi_index(f.nu(), m, [&](const MultiIndex& a) {
      Rat coeff = c * mfac / Rat(a.fact());
      for (int i = 0; i < f.nu(); ++i) v.add_term(i, a, coeff);
    });
  }
  return v;
}

// Coefficientwise graded norm: |c_m xh^m d_xh|_m = c_m.
inline Rat graded_norm(const RadialField& f, int m) { return f.coeff(m); }

inline Rat banach_norm(const RadialField& f, const Rat& rho, int offset) {
  if (rho <= 0) throw std::domain_error("banach_norm: rho must be positive");
  Rat best(0);
  for (const auto& [m, c] : f.coeffs()) {
    Rat val = c / rat_pow(rho, m - offset);
    if (val > best) best = val;
  }
  return best;
}

// Coefficientwise domination between radial fields.
inline bool majorizes(const RadialField& p, const RadialField& v) {
  int n = p.truncation() < v.truncation() ? p.truncation() : v.truncation();
  for (const auto& [m, c] : v.coeffs()) {
    if (m > n) break;
    if (c > p.coeff(m)) return false;
  }
  return true;
}

// Radial majorant against a general field, via the expansion.
inline bool majorizes(const RadialField& p, const FormalVectorField& v) { return majorizes(expand(p), v); }

// The maximal positive field of |.|_rho-norm <= M in filtration order n:
// M rho^n xh^(n+1) / (1 - rho xh) d_xh, materialized up to degree trunc.
inline RadialField canonical_field(const Rat& M, const Rat& rho, int n, int trunc) {
  if (M <= 0 || rho <= 0) throw std::domain_error("canonical_field: M and rho must be positive");
  if (n < 0) throw std::domain_error("canonical_field: n must be >= 0");
  return RadialField::geometric(1, trunc, M * rat_pow(rho, n), rho, n + 1, 1);
}

inline RadialField canonical_field(int nu, const Rat& M, const Rat& rho, int n, int trunc) {
  if (M <= 0 || rho <= 0) throw std::domain_error("canonical_field: M and rho must be positive");
  if (n < 0) throw std::domain_error("canonical_field: n must be >= 0");
  return RadialField::geometric(nu, trunc, M * rat_pow(rho, n), rho, n + 1, 1);
}

}  // namespace liejet

#endif
