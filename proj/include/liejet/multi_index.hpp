#ifndef LIEJET_MULTI_INDEX_HPP
#define LIEJET_MULTI_INDEX_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "liejet/rational.hpp"

namespace liejet {

// Exponent vector alpha over nu variables.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int nu) : e_(static_cast<std::size_t>(nu), 0) {
    if (nu < 1) throw std::invalid_argument("MultiIndex: nu must be >= 1");
  }
  MultiIndex(std::initializer_list<unsigned> e) : e_(e) {}
  explicit MultiIndex(std::vector<unsigned> e) : e_(std::move(e)) {}

  int nu() const { return static_cast<int>(e_.size()); }
  unsigned operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  unsigned& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }

  int order() const { return static_cast<int>(std::accumulate(e_.begin(), e_.end(), 0u)); }

  Int fact() const {
    Int f = 1;
    for (unsigned a : e_) f *= factorial(a);
    return f;
  }

  // Unit vector e_i (0-based position).
  static MultiIndex unit(int nu, int i) {
    MultiIndex m(nu);
    m[i] = 1;
    return m;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
    return r;
  }

  // Componentwise subtraction; valid only when o <= *this componentwise.
  bool dominates(const MultiIndex& o) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] < o.e_[i]) return false;
    return true;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (r.e_[i] < o.e_[i]) throw std::invalid_argument("MultiIndex: negative entry in difference");
      r.e_[i] -= o.e_[i];
    }
    return r;
  }

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }

  // Graded lexicographic order: by |alpha| first, then lex. Within a fixed
  // degree this coincides with plain lexicographic order, which is the
  // column/pivot order used everywhere.
  std::strong_ordering operator<=>(const MultiIndex& o) const {
    int d = order(), od = o.order();
    if (d != od) return d <=> od;
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] != o.e_[i]) return o.e_[i] <=> e_[i];  // larger first entry sorts earlier
    return std::strong_ordering::equal;
  }

  const std::vector<unsigned>& entries() const { return e_; }

 private:
  std::vector<unsigned> e_;
};

// All multi-indices of the given degree in lexicographically *descending*
// first-entry order, matching MultiIndex's within-degree ordering.
inline void for_each_multi_index(int nu, int degree, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex m(nu);
  // iterate: first entry from degree down to 0, recursing on the rest
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == nu - 1) {
      m[pos] = static_cast<unsigned>(remaining);
      fn(m);
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      m[pos] = static_cast<unsigned>(a);
      rec(pos + 1, remaining - a);
    }
  };
  rec(0, degree);
}

inline std::vector<MultiIndex> multi_indices_of_degree(int nu, int degree) {
  std::vector<MultiIndex> out;
  for_each_multi_index(nu, degree, [&](const MultiIndex& m) { out.push_back(m); });
  return out;
}

inline long count_multi_indices(int nu, int degree) {
  return binomial(static_cast<unsigned long>(degree + nu - 1), static_cast<unsigned long>(nu - 1)).get_si();
}

}  // namespace liejet

#endif
