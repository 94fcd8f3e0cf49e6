#ifndef LIEJET_BUILTIN_HPP
#define LIEJET_BUILTIN_HPP

#include "liejet/prolongation.hpp"

namespace liejet {
namespace builtin {

namespace detail {
inline RatMatrix mat2(int a, int b, int c, int d) {
  RatMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}
}  // namespace detail

// Cauchy-Riemann equations for (u, v): u_x - v_y = 0, u_y + v_x = 0.
inline PDESystem cauchy_riemann(int coeff_trunc = 0) {
  PDESystem s(2, 2, 2, coeff_trunc);
  s.set_B(0, MultiIndex(2), detail::mat2(1, 0, 0, 1));   // B^1 = [[1,0],[0,1]]
  s.set_B(1, MultiIndex(2), detail::mat2(0, -1, 1, 0));  // B^2 = [[0,-1],[1,0]]
  return s;
}

// Divergence-free planar fields: d_1 y^1 + d_2 y^2 = 0.
inline PDESystem divergence_free_2d(int coeff_trunc = 0) {
  PDESystem s(2, 2, 1, coeff_trunc);
  RatMatrix b1(1, 2), b2(1, 2);
  b1(0, 0) = 1;
  b2(0, 1) = 1;
  s.set_B(0, MultiIndex(2), b1);
  s.set_B(1, MultiIndex(2), b2);
  return s;
}

// y' = z y in one variable: solutions c exp(z^2/2).
inline PDESystem gaussian_ode(int coeff_trunc = 1) {
  PDESystem s(1, 1, 1, coeff_trunc);
  RatMatrix a(1, 1), b(1, 1);
  a(0, 0) = -1;
  b(0, 0) = 1;
  s.set_A(MultiIndex{1u}, a);
  s.set_B(0, MultiIndex(1), b);
  return s;
}

// All first derivatives vanish: y_i = 0 for every i; solutions are the
// constants.
inline PDESystem constant_solutions(int p, int q, int coeff_trunc = 0) {
  PDESystem s(p, q, p * q, coeff_trunc);
  for (int i = 0; i < p; ++i) {
    RatMatrix b(static_cast<std::size_t>(p * q), static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) b(static_cast<std::size_t>(i * q + j), static_cast<std::size_t>(j)) = 1;
    s.set_B(i, MultiIndex(p), b);
  }
  return s;
}

// The algebraic system y = 0 (A = I, B = 0): only the zero series solves it.
inline PDESystem zero_solutions(int p, int q, int coeff_trunc = 0) {
  PDESystem s(p, q, q, coeff_trunc);
  s.set_A(MultiIndex(p), RatMatrix::identity(static_cast<std::size_t>(q)));
  return s;
}

// Incompatible pair d_1 y^1 = 0, d_2 y^1 = z^1 y^2, y^2 constant: the seed
// with y^2 = 1 obstructs at order 1 (cross-derivative conflict).
inline PDESystem obstructed_example(int coeff_trunc = 1) {
  PDESystem s(2, 2, 4, coeff_trunc);
  RatMatrix b1(4, 2), b2(4, 2), a10(4, 2);
  b1(0, 0) = 1;   // eq 1: d_1 y^1
  b2(1, 0) = 1;   // eq 2: d_2 y^1 - z^1 y^2
  a10(1, 1) = -1;
  b1(2, 1) = 1;   // eq 3: d_1 y^2
  b2(3, 1) = 1;   // eq 4: d_2 y^2
  s.set_B(0, MultiIndex(2), b1);
  s.set_B(1, MultiIndex(2), b2);
  s.set_A(MultiIndex{1u, 0u}, a10);
  return s;
}

}  // namespace builtin
}  // namespace liejet

#endif
