#ifndef LIEJET_LINALG_HPP
#define LIEJET_LINALG_HPP

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "liejet/rational.hpp"

namespace liejet {

using RatVec = std::vector<Rat>;

// Dense matrix over Q. Row reduction uses deterministic pivoting: first
// nonzero entry scanning columns left to right, rows top to bottom.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  RatVec multiply(const RatVec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("RatMatrix: dimension mismatch");
    RatVec out(rows_, Rat(0));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (a_[r * cols_ + c] != 0) out[r] += a_[r * cols_ + c] * v[c];
    return out;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("RatMatrix: dimension mismatch");
    RatMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix: shape mismatch");
    RatMatrix r = a;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
    return r;
  }

  bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  Rat max_abs() const {
    Rat best(0);
    for (const auto& x : a_)
      if (abs(x) > best) best = abs(x);
    return best;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

struct Rref {
  RatMatrix m;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

inline Rref rref(RatMatrix m) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
    Rat inv = Rat(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rat f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  out.m = std::move(m);
  return out;
}

// Kernel basis of A, one vector per free column, each scaled so its first
// nonzero entry (in column order) equals 1.
inline std::vector<RatVec> kernel_basis(const RatMatrix& a) {
  Rref rr = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t free_c = 0; free_c < a.cols(); ++free_c) {
    if (is_pivot[free_c]) continue;
    RatVec v(a.cols(), Rat(0));
    v[free_c] = 1;
    for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i) v[rr.pivot_cols[i]] = -rr.m(i, free_c);
    // normalize so the first nonzero entry is 1
    for (auto& x : v) {
      if (x == 0) continue;
      if (x != 1) {
        Rat inv = Rat(1) / x;
        for (auto& y : v) y *= inv;
      }
      break;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

struct LinearSolution {
  RatVec particular;            // free variables zeroed
  std::vector<RatVec> kernel;   // normalized kernel basis
  bool consistent = true;
  std::vector<std::size_t> failing_rows;  // rows 0 = ... with nonzero rhs residue
};

// Solves A x = b exactly. The particular solution zeroes every free
// variable; inconsistency is reported with the offending reduced rows.
inline LinearSolution solve(const RatMatrix& a, const RatVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: dimension mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Rref rr = rref(std::move(aug));
  LinearSolution sol;
  for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i) {
    if (rr.pivot_cols[i] == a.cols()) {
      sol.consistent = false;
      sol.failing_rows.push_back(i);
    }
  }
  if (!sol.consistent) return sol;
  sol.particular.assign(a.cols(), Rat(0));
  for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i)
    sol.particular[rr.pivot_cols[i]] = rr.m(i, a.cols());
  sol.kernel = kernel_basis(a);
  return sol;
}

}  // namespace liejet

#endif
