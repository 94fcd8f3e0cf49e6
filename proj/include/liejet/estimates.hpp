#ifndef LIEJET_ESTIMATES_HPP
#define LIEJET_ESTIMATES_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace liejet {

// max_m m^alpha sigma^(-m) over the non-negative integers is bounded by the
// continuous maximum (alpha/ln sigma)^alpha e^(-alpha).
inline double lemma3_bound(double alpha, double sigma) {
  if (sigma <= 1.0) throw std::domain_error("lemma3_bound: sigma must exceed 1");
  if (alpha <= 0.0) throw std::domain_error("lemma3_bound: alpha must be positive");
  return std::exp(alpha * (std::log(alpha / std::log(sigma)) - 1.0));
}

// Contraction ratio q = sqrt(nu (n+1) M) / (sigma^((n-2)/2) ln sigma).
inline double q_ratio(int nu, long n, double M, double sigma) {
  if (n < 2) throw std::domain_error("q_ratio: n must be >= 2");
  if (sigma <= 1.0) throw std::domain_error("q_ratio: sigma must exceed 1");
  return std::sqrt(static_cast<double>(nu) * static_cast<double>(n + 1) * M) /
         (std::pow(sigma, 0.5 * static_cast<double>(n - 2)) * std::log(sigma));
}

// Norm bound for (k/(k+1)!) X^(k+1) and (1/k!) X^(k+1) at scale sigma*rho,
// X the canonical field of norm M in filtration order n:
//   B = (M/sigma^n) (sqrt(nu(n+1)M/sigma^(n-2)) * 2k/(e ln sigma))^(2k) / (2k)!
inline double power_bound_B(int n, int k, double sigma, double M, int nu) {
  if (n < 2) throw std::domain_error("power_bound_B: n must be >= 2");
  if (k < 1) throw std::domain_error("power_bound_B: k must be >= 1");
  if (sigma <= 1.0) throw std::domain_error("power_bound_B: sigma must exceed 1");
  double log_base = 0.5 * (std::log(static_cast<double>(nu) * (n + 1) * M) - (n - 2) * std::log(sigma)) +
                    std::log(2.0 * k) - 1.0 - std::log(std::log(sigma));
  double log_b = std::log(M) - n * std::log(sigma) + 2.0 * k * log_base - std::lgamma(2.0 * k + 1.0);
  return std::exp(log_b);
}

// Sum over k >= 1 of the power bounds: M/(sqrt(pi) sigma^n) * q^2/(1-q^2).
// Valid only when q_ratio < 1.
inline double tail_sum_bound(double M, int n, double sigma, int nu) {
  double q = q_ratio(nu, n, M, sigma);
  if (q >= 1.0) throw std::domain_error("tail_sum_bound: q_ratio must be < 1");
  return M / (std::sqrt(M_PI) * std::pow(sigma, n)) * q * q / (1.0 - q * q);
}

// Principal branch of w e^w = z, Halley iteration.
inline double lambert_w(double z) {
  constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
  if (z < kBranchPoint) {
    if (z > kBranchPoint - 1e-15) z = kBranchPoint;
    else throw std::domain_error("lambert_w: argument below -1/e");
  }
  if (z == 0.0) return 0.0;
  double w;
  if (z < -0.3578794) {
    // series around the branch point in p = sqrt(2(ez+1))
    double p = std::sqrt(2.0 * (M_E * z + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  } else if (z < 1.0) {
    // series seed near 0
    w = z * (1.0 - z * (1.0 - 1.5 * z));
  } else {
    double lz = std::log(z);
    w = lz - std::log(lz > 1.0 ? lz : 1.0);
  }
  for (int it = 0; it < 64; ++it) {
    double ew = std::exp(w);
    double f = w * ew - z;
    if (f == 0.0) break;
    double denom = ew * (w + 1.0);
    if (w != -1.0) denom -= (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == 0.0) break;
    double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

// Solves sigma^((p-2)/2) * ln(sigma) = sqrt(nu (p+1) M) / q_target for
// sigma > 1. For p >= 3 this is the Lambert-W closed form of x^a ln x = b;
// p = 2 reduces to ln(sigma) = b.
inline double sigma_for_target(long p, double M, int nu, double q_target) {
  if (p < 2) throw std::domain_error("sigma_for_target: p must be >= 2");
  if (q_target <= 0.0) throw std::domain_error("sigma_for_target: q target must be positive");
  if (M <= 0.0) throw std::domain_error("sigma_for_target: M must be positive");
  double b = std::sqrt(static_cast<double>(nu) * static_cast<double>(p + 1) * M) / q_target;
  if (p == 2) return std::exp(b);
  double a = 0.5 * static_cast<double>(p - 2);
  return std::exp(lambert_w(a * b) / a);
}

struct ScheduleState {
  int step = 0;
  long n = 0;
  double sigma = 1.0;
  double M = 0.0;
  double rho = 0.0;
  double log_sum = 0.0;  // ln(rho/rho0) after this step's dilation
};

struct ScheduleReport {
  std::vector<ScheduleState> states;
  bool converged = false;
  double rho_limit = 0.0;  // extrapolated rho_infinity (NaN when divergent)
  std::string note;
};

// The iteration n_{i+1} = 2 n_i, rho_{i+1} = sigma_i rho_i,
// M_{i+1} = (M_i/sigma_i^{n_i}) (5/(3 sqrt(pi)) + 3/(2 sigma_i^{n_i})),
// with sigma_i chosen so the step ratio q equals 1/2 at M' = (5/2) M_i.
inline ScheduleReport schedule(long n0, double rho0, double M0, int nu, int steps) {
  if (n0 < 2)
    throw std::domain_error(
        "schedule: n0 must be >= 2 (no sigma > 1 solves the step equation at n = 1; "
        "take one exact factorization step first)");
  if (rho0 <= 0.0 || M0 <= 0.0) throw std::domain_error("schedule: rho0 and M0 must be positive");
  const double c1 = 5.0 / (3.0 * std::sqrt(M_PI));
  ScheduleReport rep;
  long n = n0;
  double rho = rho0, M = M0, log_sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    double sigma = sigma_for_target(n, 2.5 * M, nu, 0.5);
    double sig_n = std::pow(sigma, static_cast<double>(n));
    ScheduleState st;
    st.step = i;
    st.n = n;
    st.sigma = sigma;
    st.M = M;
    st.rho = rho;
    log_sum += std::log(sigma);
    st.log_sum = log_sum;
    rep.states.push_back(st);
    M = M / sig_n * (c1 + 1.5 / sig_n);
    rho *= sigma;
    n *= 2;
  }
  // Convergence: the increments ln sigma_i must shrink; extrapolate the tail
  // geometrically from the last observed ratio.
  rep.converged = true;
  double last = rep.states.empty() ? 0.0 : std::log(rep.states.back().sigma);
  double prev = rep.states.size() > 1 ? std::log(rep.states[rep.states.size() - 2].sigma) : last;
  if (rep.states.size() >= 4) {
    for (std::size_t i = rep.states.size() - 3; i + 1 < rep.states.size(); ++i) {
      double d0 = std::log(rep.states[i].sigma);
      double d1 = std::log(rep.states[i + 1].sigma);
      if (d1 > d0 && d1 > 1e-15) {
        rep.converged = false;
        rep.note = "partial sums of ln sigma are not Cauchy within the horizon";
      }
    }
  }
  if (!rep.converged) {
    rep.rho_limit = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  double ratio = (prev > 0.0 && last > 0.0) ? last / prev : 0.0;
  double tail = (ratio > 0.0 && ratio < 1.0) ? last * ratio / (1.0 - ratio) : 0.0;
  rep.rho_limit = rho0 * std::exp(log_sum + tail);
  rep.note = rep.note.empty() ? "increments decay geometrically" : rep.note;
  return rep;
}

}  // namespace liejet

#endif
