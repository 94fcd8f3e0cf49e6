#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "liejet/builtin.hpp"
#include "liejet/estimates.hpp"
#include "liejet/factorization.hpp"
#include "liejet/io.hpp"
#include "liejet/verify.hpp"

using namespace liejet;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitObstruction = 3;
constexpr int kExitInvariant = 4;

PDESystem load_system(const std::string& spec) {
  if (spec == "builtin:cauchy-riemann") return builtin::cauchy_riemann();
  if (spec == "builtin:divergence-free") return builtin::divergence_free_2d();
  if (spec == "builtin:gaussian") return builtin::gaussian_ode();
  if (spec == "builtin:constants") return builtin::constant_solutions(2, 2);
  if (spec.rfind("builtin:", 0) == 0) throw ParseError("unknown builtin system '" + spec + "'");
  return pde_system_from_json(parse_json_file(spec));
}

void emit_report(const json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

json solution_table(const PDESystem& s, const std::vector<FormalSolution>& sols) {
  json arr = json::array();
  for (const auto& f : sols) {
    json row;
    row["leading_degree"] = f.leading_degree();
    row["solution"] = to_json(f);
    json norms = json::array();
    for (int l = 0; l <= f.max_degree(); ++l) norms.push_back(rat_to_string(malgrange_norm_at(f, l)));
    row["norms"] = std::move(norms);
    row["residual_zero"] = residual_is_zero(s, f, f.max_degree() - 1);
    arr.push_back(std::move(row));
  }
  return arr;
}

int run_factorize(const std::string& diffeo_path, const std::string& basis_path, int order,
                  const std::string& report_path, double rho0, double m0, bool have_m0) {
  FormalDiffeo phi = diffeo_from_json(parse_json_file(diffeo_path));
  FilteredBasis basis = basis_path.empty()
                            ? FilteredBasis::flat_monomial(phi.nu(), order, order)
                            : basis_from_json(parse_json_file(basis_path));
  auto result = factorize(phi, basis, order);

  if (!have_m0) {
    // measure the residual norm at the first step of order >= 2
    FormalDiffeo cur = phi;
    for (const auto& st : result.steps) {
      FormalVectorField z = id_minus(cur);
      if (st.order >= 2) {
        m0 = rat_to_double(banach_norm(z, Rat(rho0), 1)) * (1 + 1e-9);
        break;
      }
      cur = iterate_step(cur, basis).next;
    }
    if (m0 <= 0) m0 = 1.0;
  }
  auto conv = convergence_report(result, rho0, m0, phi.nu());

  std::cout << "factorization: " << result.factors.size() << " factors, truncation " << order << "\n";
  std::cout << std::left << std::setw(6) << "step" << std::setw(8) << "order" << std::setw(10) << "lead"
            << std::setw(14) << "|v| at rho_i" << std::setw(14) << "bound" << "within\n";
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const auto& row = conv.rows[i];
    std::cout << std::setw(6) << row.step << std::setw(8) << row.order << std::setw(10)
              << result.factors[i].min_degree() << std::setw(14) << std::setprecision(6) << row.measured
              << std::setw(14) << row.scheduled_bound << (row.certified ? (row.within ? "yes" : "NO") : "-")
              << "\n";
  }
  if (!conv.schedule.states.empty())
    std::cout << "schedule rho_infinity estimate: " << conv.schedule.rho_limit << "\n";

  bool residual_ok = result.residual == FormalDiffeo::identity(phi.nu(), order);
  bool round_trip_ok = reconstruct(result.factors, order) == phi || result.factors.empty();

  json rep;
  rep["command"] = "factorize";
  rep["truncation"] = order;
  rep["input"] = to_json(phi);
  json factors = json::array();
  for (const auto& v : result.factors) factors.push_back(to_json(v));
  rep["factors"] = std::move(factors);
  json steps = json::array();
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    json st;
    st["index"] = result.steps[i].index;
    st["order"] = result.steps[i].order;
    st["factor_min_degree"] = result.steps[i].factor_min_degree;
    st["factor_max_lead"] = result.steps[i].factor_max_lead;
    st["measured_norm"] = conv.rows[i].measured;
    st["rho"] = conv.rows[i].rho;
    st["scheduled_bound"] = conv.rows[i].certified ? json(conv.rows[i].scheduled_bound) : json();
    st["within_schedule"] = conv.rows[i].certified ? json(conv.rows[i].within) : json();
    steps.push_back(std::move(st));
  }
  rep["steps"] = std::move(steps);
  rep["residual_is_identity"] = residual_ok;
  rep["round_trip_exact"] = round_trip_ok;
  rep["all_within_schedule"] = conv.all_within;
  rep["rho_limit"] = conv.schedule.rho_limit;
  emit_report(rep, report_path);

  if (!residual_ok || !round_trip_ok) {
    std::cerr << "invariant violation: factorization failed to reproduce the input\n";
    return kExitInvariant;
  }
  return 0;
}

int run_prolong(const std::string& system_spec, int degree, const std::string& report_path) {
  PDESystem s = load_system(system_spec);
  auto jets = solve_order_zero(s);
  std::cout << "order-zero solution space: " << jets.size() << " jets\n";
  json rep;
  rep["command"] = "prolong";
  rep["degree"] = degree;
  json rows = json::array();
  std::vector<FormalSolution> grown;
  for (std::size_t j = 0; j < jets.size(); ++j) {
    FormalSolution f(s.p(), s.q_dep(), degree);
    for (const auto& [g, v] : jets[j].coeffs()) f.set_coeff(g, v);
    json orders = json::array();
    for (int l = 1; l < degree; ++l) {
      auto step = prolong_step(s, f, l);
      for (const auto& [g, v] : step.particular) f.set_coeff(g, v);
      json o;
      o["order"] = l;
      o["G_norm"] = rat_to_string(malgrange_norm(step.rhs));
      o["F_next_norm"] = rat_to_string(malgrange_norm(step.particular));
      o["kernel_dim"] = step.kernel.size();
      orders.push_back(std::move(o));
    }
    grown.push_back(f);
    json row;
    row["seed"] = j;
    row["orders"] = std::move(orders);
    rows.push_back(std::move(row));
    std::cout << "  jet " << j << ": prolonged to degree " << degree
              << (residual_is_zero(s, f, degree - 1) ? " (residual zero)" : " (RESIDUAL NONZERO)") << "\n";
  }
  rep["jets"] = std::move(rows);
  rep["solutions"] = solution_table(s, grown);
  emit_report(rep, report_path);
  for (const auto& f : grown)
    if (!residual_is_zero(s, f, degree - 1)) return kExitInvariant;
  return 0;
}

int run_basis(const std::string& system_spec, int dmax, int degree, const std::string& report_path) {
  PDESystem s = load_system(system_spec);
  auto basis = build_filtered_basis(s, dmax, degree);
  std::map<int, int> counts;
  for (const auto& f : basis) counts[f.leading_degree()]++;
  std::cout << "filtered basis: " << basis.size() << " elements\n";
  for (const auto& [d, n] : counts) std::cout << "  leading degree " << d << ": " << n << "\n";
  json rep;
  rep["command"] = "basis";
  rep["d_max"] = dmax;
  rep["degree"] = degree;
  rep["elements"] = solution_table(s, basis);
  emit_report(rep, report_path);
  return 0;
}

int run_schedule(long n0, double rho0, double m0, int nu, int steps, const std::string& report_path) {
  auto rep = schedule(n0, rho0, m0, nu, steps);
  std::cout << std::left << std::setw(5) << "i" << std::setw(12) << "n_i" << std::setw(14) << "sigma_i"
            << std::setw(14) << "M_i" << std::setw(14) << "rho_i" << "log-sum\n";
  double cap = m0;
  bool m_bound_ok = true;
  for (const auto& st : rep.states) {
    std::cout << std::setw(5) << st.step << std::setw(12) << st.n << std::setw(14) << std::setprecision(8)
              << st.sigma << std::setw(14) << st.M << std::setw(14) << st.rho << st.log_sum << "\n";
    m_bound_ok = m_bound_ok && st.M <= cap * (1 + 1e-12);
    cap *= 2.5;
  }
  std::cout << (rep.converged ? "converged" : "NOT converged") << ", rho_infinity ~= " << rep.rho_limit
            << "\n";
  std::cout << "M_i <= (5/2)^i M_0: " << (m_bound_ok ? "holds" : "VIOLATED") << "\n";
  json j;
  j["command"] = "schedule";
  j["n0"] = n0;
  j["rho0"] = rho0;
  j["M0"] = m0;
  j["nu"] = nu;
  json states = json::array();
  for (const auto& st : rep.states) {
    json row;
    row["i"] = st.step;
    row["n"] = st.n;
    row["sigma"] = st.sigma;
    row["M"] = st.M;
    row["rho"] = st.rho;
    row["log_sum"] = st.log_sum;
    states.push_back(std::move(row));
  }
  j["states"] = std::move(states);
  j["converged"] = rep.converged;
  j["rho_limit"] = rep.rho_limit;
  j["M_bound_holds"] = m_bound_ok;
  emit_report(j, report_path);
  return m_bound_ok ? 0 : kExitInvariant;
}

int run_estimate_c(const std::string& system_spec, int degree, int dmax, double r0_in,
                   const std::string& report_path) {
  PDESystem s = load_system(system_spec);
  Rat rho0(1);
  Rat M = fit_coefficient_bound(s, rho0);
  if (M == 0) M = Rat(1);
  Rat r0 = r0_in > 0 ? Rat(r0_in) : Rat(1) / (Rat(2) * rho0);
  std::vector<FormalSolution> seeds = solve_order_zero(s);
  for (int d = 2; d <= dmax; ++d)
    for (auto& seed : seeds_at_degree(s, d)) seeds.push_back(std::move(seed));
  auto est = estimate_c(s, seeds, degree, r0);
  MalgrangeConfig cfg{est.C, r0, M, rho0};
  std::cout << "estimated C = " << rat_to_string(est.C) << (est.floored ? " (floored at 1)" : "") << "\n";
  std::cout << "M = " << rat_to_string(M) << ", rho0 = " << rat_to_string(rho0)
            << ", r0 = " << rat_to_string(r0) << ", K = " << rat_to_string(malgrange_K(cfg, s.q_dep()))
            << "\n";
  if (!est.excluded.empty()) {
    std::cout << "excluded orders (zero RHS with nonzero growth):";
    for (int l : est.excluded) std::cout << " " << l;
    std::cout << "\n";
  }
  json j;
  j["command"] = "estimate-c";
  j["C"] = rat_to_string(est.C);
  j["floored"] = est.floored;
  j["M"] = rat_to_string(M);
  j["rho0"] = rat_to_string(rho0);
  j["r0"] = rat_to_string(r0);
  j["K"] = rat_to_string(malgrange_K(cfg, s.q_dep()));
  j["excluded_orders"] = est.excluded;
  emit_report(j, report_path);
  return 0;
}

int run_verify() {
  auto results = run_builtin_suite();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.passed && !r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
    all = all && r.passed;
  }
  std::cout << (all ? "all checks passed" : "SUITE FAILED") << "\n";
  return all ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated formal vector fields: exponential charts, prolongation, factorization"};
  app.require_subcommand(1);

  auto* fact = app.add_subcommand("factorize", "factor a diffeo into a product of exponentials");
  std::string fact_diffeo, fact_basis, fact_report;
  int fact_order = 8;
  double fact_rho0 = 4.0, fact_m0 = 0.0;
  fact->add_option("--diffeo", fact_diffeo, "diffeo literal (JSON)")->required();
  fact->add_option("--basis", fact_basis, "filtered basis file (default: flat monomial basis)");
  fact->add_option("--order", fact_order, "truncation order")->required();
  fact->add_option("--report", fact_report, "report path ('-' for stdout)");
  fact->add_option("--rho0", fact_rho0, "base scale for the convergence comparison");
  fact->add_option("--M0", fact_m0, "norm bound at the first certified step (measured when absent)");

  auto* prol = app.add_subcommand("prolong", "prolong the order-zero jets of a linear PDE system");
  std::string prol_system, prol_report;
  int prol_degree = 8;
  prol->add_option("--system", prol_system, "system file or builtin:<name>")->required();
  prol->add_option("--degree", prol_degree, "target degree")->required();
  prol->add_option("--report", prol_report, "report path ('-' for stdout)");

  auto* bas = app.add_subcommand("basis", "build the bounded filtered basis of a system");
  std::string bas_system, bas_report;
  int bas_dmax = 4, bas_degree = 8;
  bas->add_option("--system", bas_system, "system file or builtin:<name>")->required();
  bas->add_option("--dmax", bas_dmax, "largest leading degree")->required();
  bas->add_option("--degree", bas_degree, "prolongation degree")->required();
  bas->add_option("--report", bas_report, "report path ('-' for stdout)");

  auto* sch = app.add_subcommand("schedule", "run the convergence schedule");
  long sch_n0 = 4;
  double sch_rho0 = 1.0, sch_m0 = 1.0;
  int sch_nu = 1, sch_steps = 30;
  std::string sch_report;
  sch->add_option("--n0", sch_n0)->required();
  sch->add_option("--rho0", sch_rho0)->required();
  sch->add_option("--M0", sch_m0)->required();
  sch->add_option("--nu", sch_nu)->required();
  sch->add_option("--steps", sch_steps)->required();
  sch->add_option("--report", sch_report, "report path ('-' for stdout)");

  auto* est = app.add_subcommand("estimate-c", "estimate the a-priori constant from prolongations");
  std::string est_system, est_report;
  int est_degree = 12, est_dmax = 2;
  double est_r0 = 0.0;
  est->add_option("--system", est_system, "system file or builtin:<name>")->required();
  est->add_option("--degree", est_degree, "prolongation horizon")->required();
  est->add_option("--dmax", est_dmax, "include homogeneous seeds up to this leading degree");
  est->add_option("--r0", est_r0, "polydisc radius (default 1/(2 rho0))");
  est->add_option("--report", est_report, "report path ('-' for stdout)");

  auto* ver = app.add_subcommand("verify", "run the built-in invariant suite");
  std::string ver_suite = "builtin";
  ver->add_option("--suite", ver_suite, "suite name (builtin)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(fact))
      return run_factorize(fact_diffeo, fact_basis, fact_order, fact_report, fact_rho0, fact_m0,
                           fact->count("--M0") > 0);
    if (app.got_subcommand(prol)) return run_prolong(prol_system, prol_degree, prol_report);
    if (app.got_subcommand(bas)) return run_basis(bas_system, bas_dmax, bas_degree, bas_report);
    if (app.got_subcommand(sch)) return run_schedule(sch_n0, sch_rho0, sch_m0, sch_nu, sch_steps, sch_report);
    if (app.got_subcommand(est)) return run_estimate_c(est_system, est_degree, est_dmax, est_r0, est_report);
    if (app.got_subcommand(ver)) {
      if (ver_suite != "builtin") {
        std::cerr << "unknown suite '" << ver_suite << "'\n";
        return kExitParse;
      }
      return run_verify();
    }
  } catch (const ObstructionError& e) {
    std::cerr << "obstruction: " << e.what() << " (rows";
    for (auto r : e.rows) std::cerr << " " << r;
    std::cerr << ")\n";
    return kExitObstruction;
  } catch (const NotInAlgebraError& e) {
    std::cerr << "not in algebra: " << e.what() << "\n";
    return kExitObstruction;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
