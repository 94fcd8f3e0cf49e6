#ifndef LIEJET_POLYNOMIAL_HPP
#define LIEJET_POLYNOMIAL_HPP

#include <map>
#include <stdexcept>
#include <utility>

#include "liejet/multi_index.hpp"
#include "liejet/rational.hpp"

namespace liejet {

// Multivariate polynomial over Q, truncated at a fixed total degree.
// Absent key = zero coefficient; zero coefficients are never stored.
// Binary operations truncate at the minimum of the operand truncations.
class Poly {
 public:
  using Terms = std::map<MultiIndex, Rat>;

  Poly() : nu_(1), trunc_(0) {}
  Poly(int nu, int trunc) : nu_(nu), trunc_(trunc) {
    if (nu < 1) throw std::invalid_argument("Poly: nu must be >= 1");
    if (trunc < 0) throw std::invalid_argument("Poly: negative truncation");
  }

  static Poly monomial(int nu, int trunc, const MultiIndex& alpha, const Rat& c) {
    Poly p(nu, trunc);
    p.add_term(alpha, c);
    return p;
  }
  // The coordinate function x^i (0-based i).
  static Poly coordinate(int nu, int trunc, int i) {
    return monomial(nu, trunc, MultiIndex::unit(nu, i), Rat(1));
  }

  int nu() const { return nu_; }
  int truncation() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rat coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  // Accumulates c into the alpha term; silently drops terms beyond truncation.
  void add_term(const MultiIndex& alpha, const Rat& c) {
    if (alpha.nu() != nu_) throw std::invalid_argument("Poly: multi-index arity mismatch");
    if (c == 0 || alpha.order() > trunc_) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Degree of the lowest nonzero term; truncation+1 when zero.
  int min_degree() const { return terms_.empty() ? trunc_ + 1 : terms_.begin()->first.order(); }
  int max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.order(); }

  Poly homogeneous_part(int k) const {
    Poly p(nu_, trunc_);
    for (const auto& [a, c] : terms_)
      if (a.order() == k) p.terms_.emplace(a, c);
    return p;
  }

  Poly truncated(int n) const {
    Poly p(nu_, n < trunc_ ? n : trunc_);
    for (const auto& [a, c] : terms_) {
      if (a.order() > p.trunc_) break;
      p.terms_.emplace(a, c);
    }
    return p;
  }

  Poly operator-() const {
    Poly p(nu_, trunc_);
    for (const auto& [a, c] : terms_) p.terms_.emplace(a, -c);
    return p;
  }

  Poly& operator+=(const Poly& o) {
    check_nu(o);
    if (o.trunc_ < trunc_) *this = truncated(o.trunc_);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_nu(o);
    if (o.trunc_ < trunc_) *this = truncated(o.trunc_);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  Poly& operator*=(const Rat& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }
  friend Poly operator*(Poly p, const Rat& s) { return p *= s; }
  friend Poly operator*(const Rat& s, Poly p) { return p *= s; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_nu(b);
    Poly r(a.nu_, a.trunc_ < b.trunc_ ? a.trunc_ : b.trunc_);
    const Poly& outer = a.terms_.size() <= b.terms_.size() ? a : b;
    const Poly& inner = a.terms_.size() <= b.terms_.size() ? b : a;
    for (const auto& [ao, co] : outer.terms_) {
      int budget = r.trunc_ - ao.order();
      if (budget < 0) continue;
      for (const auto& [ai, ci] : inner.terms_) {
        if (ai.order() > budget) break;
        r.add_term(ao + ai, co * ci);
      }
    }
    return r;
  }

  Poly derivative(int j) const {
    Poly r(nu_, trunc_);
    for (const auto& [a, c] : terms_) {
      if (a[j] == 0) continue;
      MultiIndex b = a;
      b[j] -= 1;
      r.terms_.emplace(b, c * static_cast<long>(a[j]));
    }
    return r;
  }

  bool operator==(const Poly& o) const { return nu_ == o.nu_ && terms_ == o.terms_; }

 private:
  void check_nu(const Poly& o) const {
    if (nu_ != o.nu_) throw std::invalid_argument("Poly: mixed variable counts");
  }

  int nu_;
  int trunc_;
  Terms terms_;
};

}  // namespace liejet

#endif
