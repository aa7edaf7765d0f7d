#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "fairshare/traffic.hpp"

namespace fairshare {

enum class PolicyKind { Drf, Pf, Alpha };

struct ResourceLoads {
  Eigen::VectorXd load;  // sum_k rho_k a_kj per resource
  bool stable = false;   // all loads strictly below 1
};

// Traffic capacity region: stable iff every resource load is below 1.
inline ResourceLoads capacity_region_check(const std::vector<TrafficClass>& classes) {
  ResourceLoads out;
  if (classes.empty()) {
    out.load = Eigen::VectorXd();
    out.stable = true;
    return out;
  }
  const Index J = classes.front().demand.size();
  out.load = Eigen::VectorXd::Zero(J);
  for (const auto& c : classes) out.load += c.rho() * c.demand.transpose();
  out.stable = (out.load.array() < 1.0).all();
  return out;
}

// Two-class profile a1 = (1, alpha), a2 = (beta, 1) with alpha <= beta <= 1.
struct TwoClassProfile {
  double alpha;
  double beta;
  double rho1;
  double rho2;

  void validate() const {
    if (!(alpha > 0 && alpha <= beta && beta <= 1.0)) {
      throw ValidationError("profile requires 0 < alpha <= beta <= 1");
    }
    if (rho1 < 0 || rho2 < 0) throw ValidationError("loads must be non-negative");
  }
};

// Second-order service-rate approximations as both loads tend to zero.
inline std::pair<double, double> light_traffic_gamma(const TwoClassProfile& p,
                                                     PolicyKind policy) {
  p.validate();
  const double g1 = 1.0 - p.rho1 - p.beta * p.rho2;
  if (policy == PolicyKind::Drf) {
    return {g1, 1.0 - p.beta * p.rho1 - p.rho2};
  }
  const double coeff = std::max(2.0 - 1.0 / p.beta, p.alpha);
  return {g1, 1.0 - coeff * p.rho1 - p.rho2};
}

// Heavy-traffic limits as the resource-1 load rho = rho1 + beta*rho2 tends
// to 1 with resource 2 strictly less loaded. DRF equalizes both classes via
// the underlying processor-sharing behaviour; PF protects class 2.
inline std::pair<double, double> heavy_traffic_gamma(const TwoClassProfile& p,
                                                     PolicyKind policy) {
  p.validate();
  const double load1 = p.rho1 + p.beta * p.rho2;
  const double load2 = p.alpha * p.rho1 + p.rho2;
  if (!(load1 > load2)) {
    throw ValidationError("heavy-traffic form requires resource 1 more loaded");
  }
  const double g = 1.0 - load1;
  if (policy == PolicyKind::Drf) return {g, g};
  return {g, g / p.alpha};
}

// PF task volume of a permanent job claiming (1, beta) against n jobs with
// requirements (alpha, 1). Solves the two-resource KKT system directly:
// both resources saturated while beta <= 1/(1+n(1-alpha)), resource 2 alone
// afterwards.
inline double permanent_job_rate(long n, double alpha, double beta) {
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("alpha must lie in (0,1)");
  if (!(beta >= alpha && beta <= 1)) {
    throw ValidationError("claimed requirement must lie in [alpha, 1]");
  }
  if (n < 0) throw ValidationError("competing job count must be non-negative");
  if (n == 0) return std::min(1.0, 1.0 / beta);
  return std::min((1.0 - alpha) / (1.0 - alpha * beta),
                  1.0 / (beta * static_cast<double>(n + 1)));
}

// Claim that maximizes the permanent job's volume against exactly n others;
// interior (> alpha) only while n <= 1/alpha.
inline double optimal_false_claim(long n, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("alpha must lie in (0,1)");
  if (n < 1) throw ValidationError("competing job count must be at least 1");
  return 1.0 / (1.0 + static_cast<double>(n) * (1.0 - alpha));
}

struct BirthDeathResult {
  Eigen::VectorXd pi;      // stationary distribution over 0..n_max
  long n_max = 0;
  double tail_bound = 0.0; // bound on the truncated mass
};

// Stationary distribution of the class-2 population around the permanent
// job: birth rate lambda2, death rate mu2 (1 - beta phi1(n)) in state n.
// Truncation doubles until the geometric tail bound drops below tail_tol.
inline BirthDeathResult permanent_job_distribution(double alpha, double beta,
                                                   double rho2,
                                                   double tail_tol = 1e-9,
                                                   long n_max = 0) {
  if (!(rho2 >= 0 && rho2 < 1)) {
    throw ValidationError("class-2 load must lie in [0,1) for stability");
  }
  const bool adaptive = n_max <= 0;
  long cap = adaptive ? 256 : n_max;
  for (;;) {
    std::vector<double> logp(static_cast<size_t>(cap) + 1, 0.0);
    for (long n = 1; n <= cap; ++n) {
      const double death = 1.0 - beta * permanent_job_rate(n, alpha, beta);
      logp[static_cast<size_t>(n)] =
          logp[static_cast<size_t>(n - 1)] + std::log(rho2) - std::log(death);
    }
    double m = logp[0];
    for (double v : logp) m = std::max(m, v);
    Eigen::VectorXd w(cap + 1);
    for (long n = 0; n <= cap; ++n) w(n) = std::exp(logp[static_cast<size_t>(n)] - m);
    const double z = w.sum();

    // Ratios beyond cap are at most rho2/(1 - beta phi1(cap)) < 1.
    const double r = rho2 / (1.0 - beta * permanent_job_rate(cap, alpha, beta));
    const double tail = r < 1.0 ? w(cap) * r / ((1.0 - r) * z) : 1.0;
    if (tail <= tail_tol || !adaptive) {
      BirthDeathResult out;
      out.pi = w / z;
      out.n_max = cap;
      out.tail_bound = tail;
      if (out.tail_bound > tail_tol) {
        throw SolverError("birth-death truncation tail above bound", out.tail_bound,
                          cap);
      }
      return out;
    }
    cap *= 2;
  }
}

// Mean service rate of the permanent job: sum_n pi(n) phi1(n).
inline double gamma1_pf(double alpha, double beta, double rho2, long n_max = 0) {
  const BirthDeathResult bd = permanent_job_distribution(alpha, beta, rho2, 1e-9, n_max);
  double g = 0.0;
  for (long n = 0; n < bd.pi.size(); ++n) {
    g += bd.pi(n) * permanent_job_rate(n, alpha, beta);
  }
  return g;
}

// Fluid-to-task service-time ratio of a lone job draining sigma tasks
// through C slots: (sigma/C) / ((sigma-C+1)/C + sum_{k=1}^{C-1} 1/k).
inline double zero_load_ratio(long sigma, long capacity) {
  if (capacity < 1) throw ValidationError("capacity must be at least 1");
  if (sigma < capacity) {
    throw ValidationError("lone job must be able to saturate the capacity (sigma >= C)");
  }
  double harmonic = 0.0;
  for (long k = 1; k < capacity; ++k) harmonic += 1.0 / static_cast<double>(k);
  const double task_time =
      static_cast<double>(sigma - capacity + 1) / static_cast<double>(capacity) +
      harmonic;
  return (static_cast<double>(sigma) / static_cast<double>(capacity)) / task_time;
}

}  // namespace fairshare
