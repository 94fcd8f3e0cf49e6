#ifndef LIEJET_VECTOR_FIELD_HPP
#define LIEJET_VECTOR_FIELD_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "liejet/polynomial.hpp"

namespace liejet {

// Truncated formal vector field sum_i V^i(x) d_i with exact rational
// coefficients. V^i are the raw monomial coefficient series; the weighted
// basis (|alpha|!/alpha!) x^alpha d_i enters only through the norms.
class FormalVectorField {
 public:
  FormalVectorField() : nu_(1), trunc_(0), comps_(1, Poly(1, 0)) {}
  FormalVectorField(int nu, int trunc)
      : nu_(nu), trunc_(trunc), comps_(static_cast<std::size_t>(nu), Poly(nu, trunc)) {
    if (nu < 1) throw std::invalid_argument("FormalVectorField: nu must be >= 1");
  }
  explicit FormalVectorField(std::vector<Poly> comps)
      : nu_(static_cast<int>(comps.size())), trunc_(comps.at(0).truncation()), comps_(std::move(comps)) {
    for (const auto& c : comps_)
      if (c.nu() != nu_ || c.truncation() != trunc_)
        throw std::invalid_argument("FormalVectorField: inconsistent components");
  }

  int nu() const { return nu_; }
  int truncation() const { return trunc_; }
  const Poly& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }
  const std::vector<Poly>& components() const { return comps_; }

  Rat coeff(int i, const MultiIndex& alpha) const { return comps_[static_cast<std::size_t>(i)].coeff(alpha); }
  void add_term(int i, const MultiIndex& alpha, const Rat& c) {
    comps_[static_cast<std::size_t>(i)].add_term(alpha, c);
  }

  bool is_zero() const {
    for (const auto& c : comps_)
      if (!c.is_zero()) return false;
    return true;
  }

  int min_degree() const {
    int d = trunc_ + 1;
    for (const auto& c : comps_)
      if (c.min_degree() < d) d = c.min_degree();
    return d;
  }
  int max_degree() const {
    int d = -1;
    for (const auto& c : comps_)
      if (c.max_degree() > d) d = c.max_degree();
    return d;
  }

  // Smallest q with every nonzero part of degree > q; equals the truncation
  // for the zero field.
  int filtration_order() const { return min_degree() - 1; }

  bool is_positive() const {
    for (const auto& c : comps_)
      for (const auto& [a, v] : c.terms())
        if (v < 0) return false;
    return true;
  }

  FormalVectorField homogeneous_part(int k) const {
    std::vector<Poly> parts;
    parts.reserve(comps_.size());
    for (const auto& c : comps_) parts.push_back(c.homogeneous_part(k));
    return FormalVectorField(std::move(parts));
  }

  FormalVectorField truncated(int n) const {
    std::vector<Poly> parts;
    parts.reserve(comps_.size());
    for (const auto& c : comps_) parts.push_back(c.truncated(n));
    return FormalVectorField(std::move(parts));
  }

  FormalVectorField operator-() const {
    std::vector<Poly> parts;
    parts.reserve(comps_.size());
    for (const auto& c : comps_) parts.push_back(-c);
    return FormalVectorField(std::move(parts));
  }
  friend FormalVectorField operator+(const FormalVectorField& a, const FormalVectorField& b) {
    a.check_nu(b);
    std::vector<Poly> parts;
    parts.reserve(a.comps_.size());
    for (int i = 0; i < a.nu_; ++i) parts.push_back(a.comps_[i] + b.comps_[i]);
    return FormalVectorField(std::move(parts));
  }
  friend FormalVectorField operator-(const FormalVectorField& a, const FormalVectorField& b) {
    return a + (-b);
  }
  friend FormalVectorField operator*(const Rat& s, const FormalVectorField& v) {
    std::vector<Poly> parts;
    parts.reserve(v.comps_.size());
    for (const auto& c : v.comps_) parts.push_back(c * s);
    return FormalVectorField(std::move(parts));
  }

  bool operator==(const FormalVectorField& o) const { return nu_ == o.nu_ && comps_ == o.comps_; }

  void check_nu(const FormalVectorField& o) const {
    if (nu_ != o.nu_) throw std::invalid_argument("vector fields over different variable counts");
  }

 private:
  int nu_;
  int trunc_;
  std::vector<Poly> comps_;
};

// Sup norm of the degree-k part in the weighted basis {(|a|!/a!) x^a d_i}:
// max over (i, alpha) of (alpha!/k!) |v^i_alpha|.
inline Rat graded_norm(const FormalVectorField& v, int k) {
  Rat best(0);
  Rat kfac(factorial(static_cast<unsigned long>(k)));
  for (int i = 0; i < v.nu(); ++i) {
    for (const auto& [a, c] : v.component(i).terms()) {
      if (a.order() != k) continue;
      Rat w = Rat(a.fact()) / kfac * abs(c);
      if (w > best) best = w;
    }
  }
  return best;
}

// sup_k |V_k|_k / rho^(k-offset) over the stored degrees. Exact for
// polynomial fields; a finite-degree lower bound of the true sup otherwise.
inline Rat banach_norm(const FormalVectorField& v, const Rat& rho, int offset) {
  if (rho <= 0) throw std::domain_error("banach_norm: rho must be positive");
  if (offset != 0 && offset != 1) throw std::invalid_argument("banach_norm: offset must be 0 or 1");
  Rat best(0);
  for (int k = 0; k <= v.max_degree(); ++k) {
    Rat g = graded_norm(v, k);
    if (g == 0) continue;
    Rat val = g / rat_pow(rho, k - offset);
    if (val > best) best = val;
  }
  return best;
}

// X acting on Y as a derivation: the i-th component of the result is
// sum_j X^j d_j(Y^i). Truncates at min of the operand truncations.
inline FormalVectorField apply(const FormalVectorField& x, const FormalVectorField& y) {
  x.check_nu(y);
  int n = x.truncation() < y.truncation() ? x.truncation() : y.truncation();
  std::vector<Poly> parts;
  parts.reserve(static_cast<std::size_t>(x.nu()));
  for (int i = 0; i < x.nu(); ++i) {
    Poly acc(x.nu(), n);
    for (int j = 0; j < x.nu(); ++j) {
      if (x.component(j).is_zero()) continue;
      Poly d = y.component(i).derivative(j);
      if (d.is_zero()) continue;
      acc += x.component(j).truncated(n) * d.truncated(n);
    }
    parts.push_back(std::move(acc));
  }
  return FormalVectorField(std::move(parts));
}

inline FormalVectorField bracket(const FormalVectorField& x, const FormalVectorField& y) {
  return apply(x, y) - apply(y, x);
}

// Coefficientwise domination |v^i_a| <= p^i_a up to the common truncation.
// P must be positive.
inline bool majorizes(const FormalVectorField& p, const FormalVectorField& v) {
  p.check_nu(v);
  if (!p.is_positive()) throw std::invalid_argument("majorizes: majorant must be positive");
  int n = p.truncation() < v.truncation() ? p.truncation() : v.truncation();
  for (int i = 0; i < v.nu(); ++i) {
    for (const auto& [a, c] : v.component(i).terms()) {
      if (a.order() > n) break;
      if (abs(c) > p.coeff(i, a)) return false;
    }
  }
  return true;
}

// Conjugation by the dilation: the degree-k part is scaled by lambda^(k-1),
// so banach_norm(result, lambda*rho, 1) == banach_norm(V, rho, 1).
inline FormalVectorField dilation_conjugate(const FormalVectorField& v, const Rat& lambda) {
  if (lambda <= 0) throw std::domain_error("dilation_conjugate: lambda must be positive");
  FormalVectorField r(v.nu(), v.truncation());
  for (int i = 0; i < v.nu(); ++i)
    for (const auto& [a, c] : v.component(i).terms())
      r.add_term(i, a, c * rat_pow(lambda, a.order() - 1));
  return r;
}

}  // namespace liejet

#endif
