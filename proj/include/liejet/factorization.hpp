#ifndef LIEJET_FACTORIZATION_HPP
#define LIEJET_FACTORIZATION_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "liejet/diffeo.hpp"
#include "liejet/estimates.hpp"
#include "liejet/linalg.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

struct NotInAlgebraError : std::runtime_error {
  explicit NotInAlgebraError(int degree_, int step_ = -1)
      : std::runtime_error("degree-" + std::to_string(degree_) +
                           " residue is not in the span of the basis leading parts" +
                           (step_ >= 0 ? " (factorization step " + std::to_string(step_) + ")" : "")),
        degree(degree_),
        step(step_) {}
  int degree;
  int step;
};

// Basis of the Lie algebra grouped by leading degree. Elements of leading
// degree d have linearly independent leading parts; lifts carry their full
// truncated tails. rho0 is the geometric tail-bound scale of the basis.
class FilteredBasis {
 public:
  FilteredBasis(int nu, Rat rho0) : nu_(nu), rho0_(std::move(rho0)) {
    if (nu < 1) throw std::invalid_argument("FilteredBasis: nu must be >= 1");
    if (rho0_ <= 0) throw std::invalid_argument("FilteredBasis: rho0 must be positive");
  }

  int nu() const { return nu_; }
  const Rat& rho0() const { return rho0_; }

  void add(FormalVectorField element) {
    if (element.nu() != nu_) throw std::invalid_argument("FilteredBasis: mixed variable counts");
    if (element.is_zero()) throw std::invalid_argument("FilteredBasis: zero element");
    groups_[element.min_degree()].push_back(std::move(element));
  }

  const std::map<int, std::vector<FormalVectorField>>& groups() const { return groups_; }

  const std::vector<FormalVectorField>* elements_at(int leading_degree) const {
    auto it = groups_.find(leading_degree);
    return it == groups_.end() ? nullptr : &it->second;
  }

  std::vector<FormalVectorField> all_elements() const {
    std::vector<FormalVectorField> out;
    for (const auto& [d, group] : groups_)
      for (const auto& e : group) out.push_back(e);
    return out;
  }

  // Monomial basis x^alpha d_i of the full algebra for leading degrees
  // 2..max_lead; lifts are homogeneous, so every tail bound is trivial.
  static FilteredBasis flat_monomial(int nu, int max_lead, int trunc) {
    FilteredBasis b(nu, Rat(1));
    for (int d = 2; d <= max_lead && d <= trunc; ++d) {
      for (const auto& alpha : multi_indices_of_degree(nu, d)) {
        for (int i = 0; i < nu; ++i) {
          FormalVectorField e(nu, trunc);
          e.add_term(i, alpha, Rat(1));
          b.add(std::move(e));
        }
      }
    }
    return b;
  }

  // Geometric tail control |eps|_{d+k} <= rho0^k |eps|_d for every element.
  bool verify_bounded(int* offending_degree = nullptr) const {
    for (const auto& [d, group] : groups_) {
      for (const auto& e : group) {
        Rat lead = graded_norm(e, d);
        for (int k = 1; d + k <= e.truncation(); ++k) {
          if (graded_norm(e, d + k) > rat_pow(rho0_, k) * lead) {
            if (offending_degree) *offending_degree = d + k;
            return false;
          }
        }
      }
    }
    return true;
  }

  // Conjugates every element by the dilation with lambda = 1/rho0, after
  // which the tail bound holds with scale 1.
  FilteredBasis normalized() const {
    if (rho0_ <= 1) return *this;
    FilteredBasis out(nu_, Rat(1));
    for (const auto& [d, group] : groups_)
      for (const auto& e : group) out.add(dilation_conjugate(e, Rat(1) / rho0_));
    return out;
  }

 private:
  int nu_;
  Rat rho0_;
  std::map<int, std::vector<FormalVectorField>> groups_;
};

struct DecompositionResult {
  FormalVectorField X;  // free part: exact combination of basis lifts
  FormalVectorField Y;  // remainder, filtration order >= 2p
  int order = 0;        // p, the filtration order of the input
};

// Z = X + Y against the filtered basis: for l = 1..p the degree-(p+l)
// residue is lifted exactly through the leading parts and its full tail is
// subtracted, so Y keeps nothing below degree 2p+1.
inline DecompositionResult decompose(const FormalVectorField& z, const FilteredBasis& basis, int step = -1) {
  if (z.nu() != basis.nu()) throw std::invalid_argument("decompose: mixed variable counts");
  int p = z.filtration_order();
  if (z.is_zero()) return {FormalVectorField(z.nu(), z.truncation()), z, p};
  if (p < 1) throw std::invalid_argument("decompose: field must have filtration order >= 1");
  int nu = z.nu();
  FormalVectorField rem = z;
  FormalVectorField x(nu, z.truncation());
  for (int m = p + 1; m <= 2 * p && m <= z.truncation(); ++m) {
    FormalVectorField part = rem.homogeneous_part(m);
    if (part.is_zero()) continue;
    const auto* group = basis.elements_at(m);
    if (!group || group->empty()) throw NotInAlgebraError(m, step);
    auto idx = multi_indices_of_degree(nu, m);
    std::map<MultiIndex, std::size_t> pos;
    for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = k;
    RatMatrix mat(idx.size() * static_cast<std::size_t>(nu), group->size());
    for (std::size_t j = 0; j < group->size(); ++j)
      for (int i = 0; i < nu; ++i)
        for (const auto& [a, c] : (*group)[j].component(i).terms()) {
          if (a.order() != m) continue;
          mat(pos.at(a) * static_cast<std::size_t>(nu) + static_cast<std::size_t>(i), j) = c;
        }
    RatVec target(idx.size() * static_cast<std::size_t>(nu), Rat(0));
    for (int i = 0; i < nu; ++i)
      for (const auto& [a, c] : part.component(i).terms())
        target[pos.at(a) * static_cast<std::size_t>(nu) + static_cast<std::size_t>(i)] = c;
    auto sol = solve(mat, target);
    if (!sol.consistent) throw NotInAlgebraError(m, step);
    for (std::size_t j = 0; j < group->size(); ++j) {
      if (sol.particular[j] == 0) continue;
      FormalVectorField lift = sol.particular[j] * (*group)[j].truncated(z.truncation());
      x = x + lift;
      rem = rem - lift;
    }
  }
  return {std::move(x), std::move(rem), p};
}

struct SplitCertificate {
  Rat norm_X, norm_Y;   // measured truncated norms at scale rho, offset 1
  Rat bound_X, bound_Y; // (5/2) M and (3/2) M
  bool ok_X = false, ok_Y = false;
  int remainder_order = 0;
};

// Certificate for the split bounds: |X|_rho <= (5/2)M, |Y|_rho <= (3/2)M,
// valid for rho >= 4 and a basis with unit tail scale.
inline SplitCertificate verify_split_bounds(const DecompositionResult& res, const Rat& rho, const Rat& M) {
  if (rho < 4) throw std::domain_error("verify_split_bounds: rho must be >= 4");
  SplitCertificate cert;
  cert.norm_X = banach_norm(res.X, rho, 1);
  cert.norm_Y = banach_norm(res.Y, rho, 1);
  cert.bound_X = Rat(5, 2) * M;
  cert.bound_Y = Rat(3, 2) * M;
  cert.ok_X = cert.norm_X <= cert.bound_X;
  cert.ok_Y = cert.norm_Y <= cert.bound_Y;
  cert.remainder_order = res.Y.filtration_order();
  return cert;
}

struct IterateStep {
  FormalVectorField free_part;  // X, the lifted part of Z = id - Phi
  FormalDiffeo next;            // Phi o Exp X = id - W with ord W >= 2 ord Z
};

// One pass of the scheme: split Z = id - Phi into X + Y and right-compose
// with Exp X. The residual order at least doubles.
inline IterateStep iterate_step(const FormalDiffeo& phi, const FilteredBasis& basis, int step = -1) {
  FormalVectorField z = id_minus(phi);
  if (z.is_zero()) return {z, phi};
  int p = z.filtration_order();
  auto dec = decompose(z, basis, step);
  FormalDiffeo next = compose(phi, exp_field(dec.X, phi.truncation()));
  FormalVectorField w = id_minus(next);
  if (!w.is_zero() && w.filtration_order() < 2 * p)
    throw std::logic_error("iterate_step: residual order failed to double");
  return {std::move(dec.X), std::move(next)};
}

struct FactorizationStepInfo {
  int index = 0;
  int order = 0;           // p_i
  int factor_min_degree = 0;
  int factor_max_lead = 0; // 2 p_i
};

struct FactorizationResult {
  std::vector<FormalVectorField> factors;  // v_i; Phi = ... o Exp v_1 o Exp v_0
  FormalDiffeo residual;                   // identity up to the truncation
  std::vector<FactorizationStepInfo> steps;
};

// Writes Phi (identity linear part) as the product
// ... o Exp v_2 o Exp v_1 o Exp v_0 with v_i of doubling leading degree:
// iterates the scheme until the residual vanishes below the truncation.
inline FactorizationResult factorize(const FormalDiffeo& phi, const FilteredBasis& basis, int trunc) {
  if (!phi.has_identity_linear_part())
    throw std::invalid_argument("factorize: identity linear part required");
  FactorizationResult out;
  FormalDiffeo cur = phi;
  if (cur.truncation() > trunc) {
    std::vector<Poly> comps;
    for (const auto& c : cur.components()) comps.push_back(c.truncated(trunc));
    cur = FormalDiffeo(std::move(comps));
  }
  int index = 0;
  while (true) {
    FormalVectorField z = id_minus(cur);
    if (z.is_zero()) break;
    int p = z.filtration_order();
    auto step = iterate_step(cur, basis, index);
    FactorizationStepInfo info;
    info.index = index;
    info.order = p;
    info.factor_min_degree = step.free_part.min_degree();
    info.factor_max_lead = 2 * p;
    out.steps.push_back(info);
    out.factors.push_back(-step.free_part);
    cur = std::move(step.next);
    ++index;
    if (index > 2 * trunc + 4) throw std::logic_error("factorize: iteration failed to terminate");
  }
  out.residual = std::move(cur);
  return out;
}

// Right-to-left product: reconstruct(v)(x) applies Exp v_0 first. Later
// factors have higher leading degree and change nothing below it.
inline FormalDiffeo reconstruct(const std::vector<FormalVectorField>& factors, int trunc) {
  FormalDiffeo out = FormalDiffeo::identity(factors.empty() ? 1 : factors.front().nu(), trunc);
  int last_lead = 0;
  for (const auto& v : factors) {
    if (v.min_degree() <= last_lead)
      throw std::invalid_argument("reconstruct: factors must have strictly increasing leading degrees");
    last_lead = v.min_degree();
    out = compose(exp_field(v.truncated(trunc), trunc), out);
  }
  return out;
}

struct ConvergenceRow {
  int step = 0;
  int order = 0;            // measured p_i
  double measured = 0.0;    // |v_i| at the scheduled scale, offset 1
  double rho = 0.0;         // scale used for the measurement
  long scheduled_n = 0;
  double scheduled_bound = 0.0;  // (5/2) M_i
  bool certified = false;        // false for exact early steps with p < 2
  bool within = true;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  ScheduleReport schedule;
  bool all_within = true;
};

// Pairs the measured factor norms against the certified schedule. Steps of
// order p < 2 are exact computations with no analytic bound; the schedule
// starts at the first step of order >= 2.
inline ConvergenceReport convergence_report(const FactorizationResult& result, double rho0, double M0,
                                            int nu) {
  ConvergenceReport rep;
  if (result.factors.empty()) {
    rep.schedule.converged = true;
    rep.schedule.rho_limit = rho0;
    return rep;
  }
  std::size_t first_certified = result.steps.size();
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    if (result.steps[i].order >= 2) {
      first_certified = i;
      break;
    }
  }
  int sched_steps = static_cast<int>(result.steps.size() - first_certified);
  if (sched_steps > 0)
    rep.schedule = schedule(result.steps[first_certified].order, rho0, M0, nu, sched_steps);
  else {
    rep.schedule.converged = true;
    rep.schedule.rho_limit = rho0;
  }
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    ConvergenceRow row;
    row.step = result.steps[i].index;
    row.order = result.steps[i].order;
    if (i < first_certified) {
      row.rho = rho0;
      row.measured = rat_to_double(banach_norm(result.factors[i], Rat(rho0), 1));
      row.scheduled_bound = std::numeric_limits<double>::quiet_NaN();
    } else {
      const auto& st = rep.schedule.states[i - first_certified];
      row.rho = st.rho;
      row.measured = rat_to_double(banach_norm(result.factors[i], Rat(st.rho), 1));
      row.scheduled_n = st.n;
      row.scheduled_bound = 2.5 * st.M;
      row.certified = true;
      row.within = row.measured <= row.scheduled_bound * (1 + 1e-12);
      rep.all_within = rep.all_within && row.within;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace liejet

#endif
