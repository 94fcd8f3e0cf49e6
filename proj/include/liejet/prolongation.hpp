#ifndef LIEJET_PROLONGATION_HPP
#define LIEJET_PROLONGATION_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "liejet/linalg.hpp"
#include "liejet/polynomial.hpp"

namespace liejet {

// Linear homogeneous first-order system A(z) y + sum_i B^i(z) y_i = 0 with
// r equations, q dependent and p independent variables. Coefficients are
// truncated matrix Taylor series with exact rational entries.
class PDESystem {
 public:
  PDESystem(int p, int q, int r, int coeff_trunc)
      : p_(p), q_(q), r_(r), coeff_trunc_(coeff_trunc), b_(static_cast<std::size_t>(p)) {
    if (p < 1 || q < 1 || r < 1) throw std::invalid_argument("PDESystem: p, q, r must be >= 1");
  }

  int p() const { return p_; }
  int q_dep() const { return q_; }
  int r_eq() const { return r_; }
  int coeff_truncation() const { return coeff_trunc_; }

  void set_A(const MultiIndex& alpha, RatMatrix m) {
    check_block(alpha, m);
    if (alpha.order() <= coeff_trunc_) a_[alpha] = std::move(m);
  }
  void set_B(int i, const MultiIndex& alpha, RatMatrix m) {
    check_block(alpha, m);
    if (alpha.order() <= coeff_trunc_) b_[static_cast<std::size_t>(i)][alpha] = std::move(m);
  }

  const std::map<MultiIndex, RatMatrix>& A() const { return a_; }
  const std::map<MultiIndex, RatMatrix>& B(int i) const { return b_[static_cast<std::size_t>(i)]; }

  RatMatrix A_at(const MultiIndex& alpha) const {
    auto it = a_.find(alpha);
    return it == a_.end() ? RatMatrix(static_cast<std::size_t>(r_), static_cast<std::size_t>(q_)) : it->second;
  }
  RatMatrix B_at(int i, const MultiIndex& alpha) const {
    const auto& bi = b_[static_cast<std::size_t>(i)];
    auto it = bi.find(alpha);
    return it == bi.end() ? RatMatrix(static_cast<std::size_t>(r_), static_cast<std::size_t>(q_)) : it->second;
  }

  // Malgrange norm of the degree-s homogeneous coefficient part,
  // max_{|a|=s} (a!/s!) |entrywise sup|.
  Rat coeff_norm_A(int s) const { return part_norm(a_, s); }
  Rat coeff_norm_B(int i, int s) const { return part_norm(b_[static_cast<std::size_t>(i)], s); }

 private:
  static Rat part_norm(const std::map<MultiIndex, RatMatrix>& blocks, int s) {
    Rat best(0);
    Rat sfac(factorial(static_cast<unsigned long>(s)));
    for (const auto& [a, m] : blocks) {
      if (a.order() != s) continue;
      Rat v = Rat(a.fact()) / sfac * m.max_abs();
      if (v > best) best = v;
    }
    return best;
  }
  void check_block(const MultiIndex& alpha, const RatMatrix& m) const {
    if (alpha.nu() != p_) throw std::invalid_argument("PDESystem: multi-index format must be p");
    if (m.rows() != static_cast<std::size_t>(r_) || m.cols() != static_cast<std::size_t>(q_))
      throw std::invalid_argument("PDESystem: coefficient blocks must be r x q");
  }

  int p_, q_, r_, coeff_trunc_;
  std::map<MultiIndex, RatMatrix> a_;
  std::vector<std::map<MultiIndex, RatMatrix>> b_;
};

// Truncated formal solution y = sum f_gamma z^gamma, f_gamma in Q^q.
class FormalSolution {
 public:
  FormalSolution() : p_(1), q_(1), max_degree_(0) {}
  FormalSolution(int p, int q, int max_degree) : p_(p), q_(q), max_degree_(max_degree) {}

  int p() const { return p_; }
  int q_dep() const { return q_; }
  int max_degree() const { return max_degree_; }
  const std::map<MultiIndex, RatVec>& coeffs() const { return c_; }

  RatVec coeff(const MultiIndex& gamma) const {
    auto it = c_.find(gamma);
    return it == c_.end() ? RatVec(static_cast<std::size_t>(q_), Rat(0)) : it->second;
  }

  void set_coeff(const MultiIndex& gamma, RatVec v) {
    if (gamma.nu() != p_ || v.size() != static_cast<std::size_t>(q_))
      throw std::invalid_argument("FormalSolution: bad coefficient shape");
    if (gamma.order() > max_degree_) return;
    bool nonzero = false;
    for (const auto& x : v) nonzero = nonzero || x != 0;
    if (nonzero)
      c_[gamma] = std::move(v);
    else
      c_.erase(gamma);
  }

  bool is_zero() const { return c_.empty(); }
  int leading_degree() const { return c_.empty() ? max_degree_ + 1 : c_.begin()->first.order(); }

  FormalSolution& operator+=(const FormalSolution& o) {
    for (const auto& [g, v] : o.c_) {
      RatVec cur = coeff(g);
      for (std::size_t j = 0; j < cur.size(); ++j) cur[j] += v[j];
      set_coeff(g, cur);
    }
    return *this;
  }
  FormalSolution scaled(const Rat& s) const {
    FormalSolution r(p_, q_, max_degree_);
    if (s == 0) return r;
    for (const auto& [g, v] : c_) {
      RatVec w = v;
      for (auto& x : w) x *= s;
      r.c_[g] = std::move(w);
    }
    return r;
  }

  // The q component series as polynomials, truncated at trunc.
  std::vector<Poly> component_polys(int trunc) const {
    std::vector<Poly> out(static_cast<std::size_t>(q_), Poly(p_, trunc));
    for (const auto& [g, v] : c_)
      for (int j = 0; j < q_; ++j) out[static_cast<std::size_t>(j)].add_term(g, v[static_cast<std::size_t>(j)]);
    return out;
  }

  bool operator==(const FormalSolution& o) const { return p_ == o.p_ && q_ == o.q_ && c_ == o.c_; }

 private:
  int p_, q_, max_degree_;
  std::map<MultiIndex, RatVec> c_;
};

// Malgrange norm |H|_l = max_{|b|=l} (b!/l!) |h_b| of a homogeneous
// vector-valued polynomial given by its coefficient map.
inline Rat malgrange_norm(const std::map<MultiIndex, RatVec>& h) {
  if (h.empty()) return Rat(0);
  int l = h.begin()->first.order();
  Rat lfac(factorial(static_cast<unsigned long>(l)));
  Rat best(0);
  for (const auto& [b, v] : h) {
    if (b.order() != l) throw std::invalid_argument("malgrange_norm: input is not homogeneous");
    Rat sup(0);
    for (const auto& x : v)
      if (abs(x) > sup) sup = abs(x);
    Rat w = Rat(b.fact()) / lfac * sup;
    if (w > best) best = w;
  }
  return best;
}

// Degree-l part of a formal solution.
inline Rat malgrange_norm_at(const FormalSolution& f, int l) {
  Rat best(0);
  Rat lfac(factorial(static_cast<unsigned long>(l)));
  for (const auto& [g, v] : f.coeffs()) {
    if (g.order() != l) continue;
    Rat sup(0);
    for (const auto& x : v)
      if (abs(x) > sup) sup = abs(x);
    Rat w = Rat(g.fact()) / lfac * sup;
    if (w > best) best = w;
  }
  return best;
}

// |F_i|_t for the derivative series F_i = d F / d z^i:
// (F_i)_t = sum_{|g|=t} (g_i+1) f_{g+e_i} z^g.
inline Rat derivative_part_norm(const FormalSolution& f, int i, int t) {
  Rat best(0);
  Rat tfac(factorial(static_cast<unsigned long>(t)));
  MultiIndex ei = MultiIndex::unit(f.p(), i);
  for (const auto& [g, v] : f.coeffs()) {
    if (g.order() != t + 1 || g[i] == 0) continue;
    MultiIndex gm = g - ei;
    Rat sup(0);
    for (const auto& x : v)
      if (abs(x) > sup) sup = abs(x);
    Rat w = Rat(gm.fact()) / tfac * Rat(static_cast<long>(g[i])) * sup;
    if (w > best) best = w;
  }
  return best;
}

struct ObstructionError : std::runtime_error {
  ObstructionError(int order_, std::vector<std::size_t> rows_)
      : std::runtime_error("prolongation obstructed at order " + std::to_string(order_)),
        order(order_),
        rows(std::move(rows_)) {}
  int order;
  std::vector<std::size_t> rows;
};

namespace detail {

// LHS of the order-l equation: the map from degree-(l+1) coefficients to the
// order-l rows, f ->  [sum_i B^i_0 (b_i+1) f_{b+e_i}]_{|b|=l}.
inline RatMatrix order_lhs_matrix(const PDESystem& s, int l) {
  auto rows_idx = multi_indices_of_degree(s.p(), l);
  auto cols_idx = multi_indices_of_degree(s.p(), l + 1);
  std::map<MultiIndex, std::size_t> col_of;
  for (std::size_t k = 0; k < cols_idx.size(); ++k) col_of[cols_idx[k]] = k;
  std::size_t q = static_cast<std::size_t>(s.q_dep()), r = static_cast<std::size_t>(s.r_eq());
  RatMatrix m(rows_idx.size() * r, cols_idx.size() * q);
  MultiIndex zero(s.p());
  for (std::size_t bi = 0; bi < rows_idx.size(); ++bi) {
    const MultiIndex& beta = rows_idx[bi];
    for (int i = 0; i < s.p(); ++i) {
      RatMatrix blk = s.B_at(i, zero);
      MultiIndex gamma = beta + MultiIndex::unit(s.p(), i);
      std::size_t cj = col_of.at(gamma);
      Rat mult(static_cast<long>(beta[i] + 1));
      for (std::size_t er = 0; er < r; ++er)
        for (std::size_t ec = 0; ec < q; ++ec)
          m(bi * r + er, cj * q + ec) += mult * blk(er, ec);
    }
  }
  return m;
}

}  // namespace detail

struct ProlongStep {
  int order = 0;                                    // l: the equation order solved
  std::map<MultiIndex, RatVec> particular;          // degree-(l+1) coefficients, free vars zeroed
  std::vector<std::map<MultiIndex, RatVec>> kernel; // homogeneous freedom at degree l+1
  std::map<MultiIndex, RatVec> rhs;                 // G_l, the order-l right-hand side (values in Q^r)
};

// Solves the order-l equation for the degree-(l+1) coefficients given a
// partial solution through degree l. Throws ObstructionError when the
// right-hand side leaves the image of the constant-coefficient symbol.
inline ProlongStep prolong_step(const PDESystem& s, const FormalSolution& partial, int l) {
  if (l < 0) throw std::invalid_argument("prolong_step: negative order");
  auto rows_idx = multi_indices_of_degree(s.p(), l);
  auto cols_idx = multi_indices_of_degree(s.p(), l + 1);
  std::size_t q = static_cast<std::size_t>(s.q_dep()), r = static_cast<std::size_t>(s.r_eq());

  ProlongStep out;
  out.order = l;
  RatVec rhs(rows_idx.size() * r, Rat(0));
  MultiIndex zero(s.p());
  for (std::size_t bi = 0; bi < rows_idx.size(); ++bi) {
    const MultiIndex& beta = rows_idx[bi];
    RatVec acc(r, Rat(0));
    // A-part: sum over stored A_alpha with alpha <= beta of A_alpha f_{beta-alpha}
    for (const auto& [alpha, blk] : s.A()) {
      if (alpha.order() > l || !beta.dominates(alpha)) continue;
      RatVec f = partial.coeff(beta - alpha);
      for (std::size_t er = 0; er < r; ++er)
        for (std::size_t ec = 0; ec < q; ++ec)
          if (blk(er, ec) != 0) acc[er] += blk(er, ec) * f[ec];
    }
    // B-part with alpha != 0: B^i_alpha (gamma_i+1) f_{gamma+e_i}, gamma = beta-alpha
    for (int i = 0; i < s.p(); ++i) {
      MultiIndex ei = MultiIndex::unit(s.p(), i);
      for (const auto& [alpha, blk] : s.B(i)) {
        if (alpha.order() == 0 || alpha.order() > l || !beta.dominates(alpha)) continue;
        MultiIndex gamma = beta - alpha;
        RatVec f = partial.coeff(gamma + ei);
        Rat mult(static_cast<long>(gamma[i] + 1));
        for (std::size_t er = 0; er < r; ++er)
          for (std::size_t ec = 0; ec < q; ++ec)
            if (blk(er, ec) != 0) acc[er] += mult * blk(er, ec) * f[ec];
      }
    }
    bool nonzero = false;
    for (std::size_t er = 0; er < r; ++er) {
      rhs[bi * r + er] = -acc[er];
      nonzero = nonzero || acc[er] != 0;
    }
    if (nonzero) {
      RatVec g(acc);
      for (auto& x : g) x = -x;
      out.rhs[beta] = std::move(g);
    }
  }

  auto sol = solve(detail::order_lhs_matrix(s, l), rhs);
  if (!sol.consistent) throw ObstructionError(l, sol.failing_rows);

  auto unpack = [&](const RatVec& flat) {
    std::map<MultiIndex, RatVec> m;
    for (std::size_t k = 0; k < cols_idx.size(); ++k) {
      RatVec v(flat.begin() + static_cast<long>(k * q), flat.begin() + static_cast<long>((k + 1) * q));
      bool nz = false;
      for (const auto& x : v) nz = nz || x != 0;
      if (nz) m[cols_idx[k]] = std::move(v);
    }
    return m;
  };
  out.particular = unpack(sol.particular);
  for (const auto& k : sol.kernel) out.kernel.push_back(unpack(k));
  return out;
}

// Extends the partial solution with pinned (free-variables-zeroed)
// prolongation steps through degree `to_degree`.
inline FormalSolution prolong(const PDESystem& s, FormalSolution f, int from_order, int to_degree) {
  for (int l = from_order; l < to_degree; ++l) {
    auto step = prolong_step(s, f, l);
    for (const auto& [g, v] : step.particular) f.set_coeff(g, v);
  }
  return f;
}

// Exact residual A F + sum_i B^i dF/dz^i as r polynomials, truncated at
// `trunc`. A formal solution of max degree N has zero residual through
// order N-1.
inline std::vector<Poly> system_residual(const PDESystem& s, const FormalSolution& f, int trunc) {
  auto comps = f.component_polys(trunc + 1 < f.max_degree() ? trunc + 1 : f.max_degree());
  std::vector<Poly> res(static_cast<std::size_t>(s.r_eq()), Poly(s.p(), trunc));
  std::size_t q = static_cast<std::size_t>(s.q_dep());
  auto accumulate = [&](const std::map<MultiIndex, RatMatrix>& blocks, const std::vector<Poly>& ys) {
    for (const auto& [alpha, blk] : blocks) {
      for (std::size_t er = 0; er < static_cast<std::size_t>(s.r_eq()); ++er)
        for (std::size_t ec = 0; ec < q; ++ec) {
          if (blk(er, ec) == 0 || ys[ec].is_zero()) continue;
          Poly term = ys[ec].truncated(trunc - alpha.order() < 0 ? 0 : trunc - alpha.order());
          for (const auto& [g, c] : term.terms()) res[er].add_term(g + alpha, blk(er, ec) * c);
        }
    }
  };
  accumulate(s.A(), comps);
  for (int i = 0; i < s.p(); ++i) {
    std::vector<Poly> dys;
    dys.reserve(comps.size());
    for (const auto& y : comps) dys.push_back(y.derivative(i));
    accumulate(s.B(i), dys);
  }
  return res;
}

inline bool residual_is_zero(const PDESystem& s, const FormalSolution& f, int up_to_order) {
  for (const auto& poly : system_residual(s, f, up_to_order))
    if (!poly.is_zero()) return false;
  return true;
}

// Basis of admissible 1-jets: the kernel of (f_0, f_{e_1}, ..., f_{e_p})
// -> A_0 f_0 + sum_i B^i_0 f_{e_i}, normalized like every kernel here.
inline std::vector<FormalSolution> solve_order_zero(const PDESystem& s) {
  std::size_t q = static_cast<std::size_t>(s.q_dep()), r = static_cast<std::size_t>(s.r_eq());
  std::size_t cols = (1 + static_cast<std::size_t>(s.p())) * q;
  RatMatrix m(r, cols);
  MultiIndex zero(s.p());
  RatMatrix a0 = s.A_at(zero);
  for (std::size_t er = 0; er < r; ++er)
    for (std::size_t ec = 0; ec < q; ++ec) m(er, ec) = a0(er, ec);
  for (int i = 0; i < s.p(); ++i) {
    RatMatrix bi = s.B_at(i, zero);
    for (std::size_t er = 0; er < r; ++er)
      for (std::size_t ec = 0; ec < q; ++ec) m(er, (1 + static_cast<std::size_t>(i)) * q + ec) = bi(er, ec);
  }
  std::vector<FormalSolution> jets;
  for (const auto& k : kernel_basis(m)) {
    FormalSolution f(s.p(), s.q_dep(), 1);
    f.set_coeff(zero, RatVec(k.begin(), k.begin() + static_cast<long>(q)));
    for (int i = 0; i < s.p(); ++i)
      f.set_coeff(MultiIndex::unit(s.p(), i),
                  RatVec(k.begin() + static_cast<long>((1 + static_cast<std::size_t>(i)) * q),
                         k.begin() + static_cast<long>((2 + static_cast<std::size_t>(i)) * q)));
    jets.push_back(std::move(f));
  }
  return jets;
}

// Seeds of leading degree d. For d >= 1 these are the kernel vectors of the
// order-(d-1) symbol on degree-d coefficients. For d = 0 they are the
// admissible constants: the projection of the order-zero kernel onto f_0,
// each lifted by the pinned solve for the forced degree-1 part.
inline std::vector<FormalSolution> seeds_at_degree(const PDESystem& s, int d) {
  std::size_t q = static_cast<std::size_t>(s.q_dep());
  if (d >= 1) {
    auto cols_idx = multi_indices_of_degree(s.p(), d);
    std::vector<FormalSolution> seeds;
    for (const auto& k : kernel_basis(detail::order_lhs_matrix(s, d - 1))) {
      FormalSolution f(s.p(), s.q_dep(), d);
      for (std::size_t c = 0; c < cols_idx.size(); ++c)
        f.set_coeff(cols_idx[c],
                    RatVec(k.begin() + static_cast<long>(c * q), k.begin() + static_cast<long>((c + 1) * q)));
      seeds.push_back(std::move(f));
    }
    return seeds;
  }
  // d = 0: row-reduce the order-zero kernel, keep rows with pivot in the
  // f_0 block, re-lift their constant parts with the pinned solve.
  auto jets = solve_order_zero(s);
  if (jets.empty()) return {};
  MultiIndex zero(s.p());
  RatMatrix rowsm(jets.size(), (1 + static_cast<std::size_t>(s.p())) * q);
  for (std::size_t j = 0; j < jets.size(); ++j) {
    RatVec f0 = jets[j].coeff(zero);
    for (std::size_t c = 0; c < q; ++c) rowsm(j, c) = f0[c];
    for (int i = 0; i < s.p(); ++i) {
      RatVec fe = jets[j].coeff(MultiIndex::unit(s.p(), i));
      for (std::size_t c = 0; c < q; ++c) rowsm(j, (1 + static_cast<std::size_t>(i)) * q + c) = fe[c];
    }
  }
  Rref rr = rref(std::move(rowsm));
  std::vector<FormalSolution> seeds;
  RatMatrix symbol = detail::order_lhs_matrix(s, 0);
  RatMatrix a0 = s.A_at(zero);
  for (std::size_t row = 0; row < rr.rank; ++row) {
    if (rr.pivot_cols[row] >= q) continue;  // pivot outside the f_0 block
    RatVec f0(q);
    for (std::size_t c = 0; c < q; ++c) f0[c] = rr.m(row, c);
    // normalize: first nonzero of f_0 equal to 1 (pivot guarantees nonzero)
    Rat lead = f0[rr.pivot_cols[row]];
    for (auto& x : f0) x /= lead;
    RatVec rhs(static_cast<std::size_t>(s.r_eq()), Rat(0));
    for (std::size_t er = 0; er < rhs.size(); ++er)
      for (std::size_t ec = 0; ec < q; ++ec) rhs[er] -= a0(er, ec) * f0[ec];
    auto sol = solve(symbol, rhs);
    if (!sol.consistent) continue;  // f_0 not admissible; cannot happen for kernel projections
    FormalSolution f(s.p(), s.q_dep(), 1);
    f.set_coeff(zero, f0);
    auto cols_idx = multi_indices_of_degree(s.p(), 1);
    for (std::size_t c = 0; c < cols_idx.size(); ++c)
      f.set_coeff(cols_idx[c], RatVec(sol.particular.begin() + static_cast<long>(c * q),
                                      sol.particular.begin() + static_cast<long>((c + 1) * q)));
    seeds.push_back(std::move(f));
  }
  return seeds;
}

// Bounded filtered basis via the prolongation scheme: for each leading
// degree d <= d_max, the degree-d seeds prolonged to degree N with zeroed
// free variables.
inline std::vector<FormalSolution> build_filtered_basis(const PDESystem& s, int d_max, int N) {
  std::vector<FormalSolution> basis;
  for (int d = 0; d <= d_max; ++d) {
    for (auto& seed : seeds_at_degree(s, d)) {
      FormalSolution f(s.p(), s.q_dep(), N);
      for (const auto& [g, v] : seed.coeffs()) f.set_coeff(g, v);
      int start = d == 0 ? 1 : d;
      basis.push_back(prolong(s, std::move(f), start, N));
    }
  }
  return basis;
}

// Exact decomposition of a truncated solution over a filtered basis,
// leading degree by leading degree. Returns false when some homogeneous
// residue falls outside the span.
struct BasisDecomposition {
  std::vector<Rat> coefficients;  // aligned with the basis order
  FormalSolution remainder;       // zero on success
  bool complete = false;
};

inline BasisDecomposition decompose_over_basis(const FormalSolution& f,
                                               const std::vector<FormalSolution>& basis, int up_to_degree) {
  BasisDecomposition out;
  out.coefficients.assign(basis.size(), Rat(0));
  FormalSolution rem = f;
  for (int d = 0; d <= up_to_degree; ++d) {
    std::vector<std::size_t> group;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (basis[j].leading_degree() == d) group.push_back(j);
    auto idx = multi_indices_of_degree(f.p(), d);
    std::size_t q = static_cast<std::size_t>(f.q_dep());
    RatVec target(idx.size() * q, Rat(0));
    bool any = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      RatVec v = rem.coeff(idx[k]);
      for (std::size_t c = 0; c < q; ++c) {
        target[k * q + c] = v[c];
        any = any || v[c] != 0;
      }
    }
    if (!any) continue;
    if (group.empty()) {
      out.remainder = rem;
      return out;
    }
    RatMatrix m(target.size(), group.size());
    for (std::size_t gj = 0; gj < group.size(); ++gj)
      for (std::size_t k = 0; k < idx.size(); ++k) {
        RatVec v = basis[group[gj]].coeff(idx[k]);
        for (std::size_t c = 0; c < q; ++c) m(k * q + c, gj) = v[c];
      }
    auto sol = solve(m, target);
    if (!sol.consistent) {
      out.remainder = rem;
      return out;
    }
    for (std::size_t gj = 0; gj < group.size(); ++gj) {
      if (sol.particular[gj] == 0) continue;
      out.coefficients[group[gj]] += sol.particular[gj];
      FormalSolution scaled = basis[group[gj]].scaled(-sol.particular[gj]);
      rem += scaled;
    }
  }
  out.remainder = rem;
  out.complete = true;
  for (const auto& [g, v] : rem.coeffs()) {
    if (g.order() > up_to_degree) continue;
    for (const auto& x : v) out.complete = out.complete && x == 0;
  }
  return out;
}

// Constants of the a-priori growth control.
struct MalgrangeConfig {
  Rat C = Rat(1);
  Rat r0 = Rat(1, 2);
  Rat M = Rat(1);
  Rat rho0 = Rat(1);
};

// Checks |A|_s <= M rho0^s and |B^i|_s <= M rho0^s through the stored
// coefficient degrees.
inline bool verify_coefficient_bounds(const PDESystem& s, const MalgrangeConfig& cfg) {
  for (int deg = 0; deg <= s.coeff_truncation(); ++deg) {
    Rat cap = cfg.M * rat_pow(cfg.rho0, deg);
    if (s.coeff_norm_A(deg) > cap) return false;
    for (int i = 0; i < s.p(); ++i)
      if (s.coeff_norm_B(i, deg) > cap) return false;
  }
  return true;
}

// Minimal M for the given rho0 over the stored coefficient degrees.
inline Rat fit_coefficient_bound(const PDESystem& s, const Rat& rho0) {
  Rat best(0);
  for (int deg = 0; deg <= s.coeff_truncation(); ++deg) {
    Rat scale = rat_pow(rho0, deg);
    Rat v = s.coeff_norm_A(deg) / scale;
    if (v > best) best = v;
    for (int i = 0; i < s.p(); ++i) {
      v = s.coeff_norm_B(i, deg) / scale;
      if (v > best) best = v;
    }
  }
  return best;
}

inline Rat malgrange_K(const MalgrangeConfig& cfg, int q_dep) {
  Rat cmq = cfg.C * cfg.M * Rat(q_dep);
  return cfg.rho0 + cmq / cfg.r0 + cmq * cfg.rho0 / cfg.r0;
}

// The majorant recursion evaluated exactly: seeds give phi_0..phi_{d0} and
//   phi_{l+1} = CMq/(r0(l+1)) [ sum_{t<=l} rho0^(l-t) phi_t
//                              + sum_{1<=t<=l} rho0^(l+1-t) t phi_t ].
inline std::vector<Rat> phi_sequence(const MalgrangeConfig& cfg, int q_dep, const std::vector<Rat>& seeds,
                                     int L) {
  if (seeds.empty()) throw std::invalid_argument("phi_sequence: at least one seed required");
  std::vector<Rat> phi = seeds;
  Rat cmq = cfg.C * cfg.M * Rat(q_dep);
  for (int l = static_cast<int>(seeds.size()) - 1; l < L; ++l) {
    Rat first(0), second(0);
    for (int t = 0; t <= l; ++t) {
      first += rat_pow(cfg.rho0, l - t) * phi[static_cast<std::size_t>(t)];
      if (t >= 1) second += rat_pow(cfg.rho0, l + 1 - t) * Rat(t) * phi[static_cast<std::size_t>(t)];
    }
    phi.push_back(cmq / (cfg.r0 * Rat(l + 1)) * (first + second));
  }
  return phi;
}

// One-term form phi_{l+1} = [l/(l+1) rho0 + CMq/(r0(l+1)) (1 + rho0 l)] phi_l,
// valid once phi_l itself came from the recursion.
inline Rat phi_next_telescoped(const MalgrangeConfig& cfg, int q_dep, int l, const Rat& phi_l) {
  Rat cmq = cfg.C * cfg.M * Rat(q_dep);
  return (Rat(l) / Rat(l + 1) * cfg.rho0 + cmq / (cfg.r0 * Rat(l + 1)) * (Rat(1) + cfg.rho0 * Rat(l))) * phi_l;
}

struct StrongBoundednessReport {
  bool holds = true;
  int first_violation = -1;          // k with |F|_{d+k} > K^k |F|_d
  double empirical_K = 0.0;          // max_k (|F|_{d+k}/|F|_d)^(1/k)
  std::vector<Rat> norms;            // |F|_d, |F|_{d+1}, ...
};

// Verifies |F|_{d+k} <= K^k |F|_d for all stored k and reports the minimal
// constant that would make the geometric bound tight.
inline StrongBoundednessReport strong_boundedness_check(const FormalSolution& f, const Rat& K, int d) {
  StrongBoundednessReport rep;
  Rat base = malgrange_norm_at(f, d);
  for (int k = 0; d + k <= f.max_degree(); ++k) {
    Rat n = malgrange_norm_at(f, d + k);
    rep.norms.push_back(n);
    if (k == 0) continue;
    if (base == 0) {
      if (n != 0) {
        rep.holds = false;
        if (rep.first_violation < 0) rep.first_violation = k;
      }
      continue;
    }
    if (n > rat_pow(K, k) * base && rep.first_violation < 0) {
      rep.holds = false;
      rep.first_violation = k;
    }
    if (n > 0) {
      double ratio = std::pow(rat_to_double(n / base), 1.0 / k);
      if (ratio > rep.empirical_K) rep.empirical_K = ratio;
    }
  }
  return rep;
}

struct CEstimate {
  Rat C = Rat(1);                // least admissible constant, floored at 1
  std::vector<int> excluded;     // orders with zero RHS but nonzero new part
  bool floored = true;           // true when every computed ratio was <= 1
};

// Least C with |F|_{l+1} <= C/(r0 (l+1)) |G_l|_l across all prolongation
// orders of all sample seeds, floored at 1. Orders with |G_l| = 0 and a
// nonzero pinned particular part are excluded and flagged.
inline CEstimate estimate_c(const PDESystem& s, const std::vector<FormalSolution>& seed_jets, int L,
                            const Rat& r0) {
  CEstimate est;
  for (const auto& seed : seed_jets) {
    FormalSolution f(s.p(), s.q_dep(), L);
    for (const auto& [g, v] : seed.coeffs()) f.set_coeff(g, v);
    int start = seed.leading_degree() == 0 ? 1 : seed.leading_degree();
    for (int l = start; l < L; ++l) {
      auto step = prolong_step(s, f, l);
      for (const auto& [g, v] : step.particular) f.set_coeff(g, v);
      Rat gl = malgrange_norm(step.rhs);
      Rat fl1 = malgrange_norm(step.particular);
      if (gl == 0) {
        if (fl1 != 0) est.excluded.push_back(l);
        continue;
      }
      Rat candidate = fl1 * r0 * Rat(l + 1) / gl;
      if (candidate > est.C) {
        est.C = candidate;
        est.floored = false;
      }
    }
  }
  return est;
}

}  // namespace liejet

#endif
