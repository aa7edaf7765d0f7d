#include "fairshare/fluid_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairshare/rng.hpp"

namespace fairshare {

namespace {

// Per-event allocation for the aggregated class population: one row per
// class with the current count as multiplicity (empty classes simply carry
// zero weight). DRF water-fills; PF and alpha-fair reuse the warm solver.
class EventAllocator {
 public:
  EventAllocator(const std::vector<TrafficClass>& classes, Policy policy,
                 double tol, long max_iters)
      : policy_(policy),
        full_(demand_matrix(classes)),
        weights_(full_.drf_weights()),
        warm_(full_, policy.kind == PolicyKind::Alpha ? policy.alpha : 1.0, tol,
              max_iters) {}

  void allocate(const Eigen::VectorXd& counts, Eigen::VectorXd& phi_out) {
    if (counts.sum() <= 0.0) {
      phi_out.setZero(full_.jobs());
      return;
    }
    if (policy_.kind == PolicyKind::Drf) {
      phi_out = waterfill(full_, weights_, counts).phi;
      return;
    }
    phi_out = warm_.solve(counts);
  }

  const DemandMatrix<double>& matrix() const { return full_; }

 private:
  Policy policy_;
  DemandMatrix<double> full_;
  Eigen::VectorXd weights_;
  WarmKktSolver warm_;
};

}  // namespace

SimResult simulate_fluid(const std::vector<TrafficClass>& classes, Policy policy,
                         const FluidParams& params) {
  if (classes.empty()) throw ValidationError("at least one traffic class required");
  for (const auto& c : classes) c.validate();
  if (!(params.horizon > 0)) throw ValidationError("horizon must be positive");
  const double warmup =
      params.warmup >= 0 ? params.warmup : 0.1 * params.horizon;
  if (warmup >= params.horizon) throw ValidationError("warmup must precede horizon");

  const Index K = static_cast<Index>(classes.size());
  EventAllocator allocator(classes, policy, params.solver_tol,
                           params.solver_max_iters);

  SimResult result;
  result.seed = params.seed;
  result.stable = capacity_region_check(classes).stable;

  Rng rng(params.seed);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd phi(K);
  std::vector<double> rates(static_cast<size_t>(2 * K));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(K);

  double t = 0.0;
  const double measure_len = params.horizon - warmup;
  while (t < params.horizon) {
    try {
      allocator.allocate(counts, phi);
    } catch (const SolverError& e) {
      throw SolverError("allocation solver failed at t=" + std::to_string(t) +
                            ": " + e.what(),
                        e.residual(), e.iterations());
    }
    const Eigen::VectorXd usage =
        allocator.matrix().coeffs().transpose() * counts.cwiseProduct(phi);
    result.max_usage = std::max(result.max_usage,
                                usage.size() > 0 ? usage.maxCoeff() : 0.0);

    double total_rate = 0.0;
    for (Index k = 0; k < K; ++k) {
      rates[static_cast<size_t>(k)] = classes[static_cast<size_t>(k)].lambda;
      rates[static_cast<size_t>(K + k)] =
          counts(k) * phi(k) * classes[static_cast<size_t>(k)].mu();
      total_rate += rates[static_cast<size_t>(k)] + rates[static_cast<size_t>(K + k)];
    }
    if (total_rate <= 0.0) break;  // no arrivals and empty system

    const double dt = rng.exponential(total_rate);
    const double lo = std::max(t, warmup);
    const double hi = std::min(t + dt, params.horizon);
    if (hi > lo) acc += counts * (hi - lo);
    t += dt;
    if (t >= params.horizon) break;

    const size_t which = rng.pick_weighted(rates, total_rate);
    if (which < static_cast<size_t>(K)) {
      counts(static_cast<Index>(which)) += 1;
    } else {
      counts(static_cast<Index>(which) - K) -= 1;
    }
    ++result.events;
  }

  result.time = measure_len;
  result.mean_jobs.resize(static_cast<size_t>(K));
  result.gamma.resize(static_cast<size_t>(K));
  for (Index k = 0; k < K; ++k) {
    const auto& c = classes[static_cast<size_t>(k)];
    const double mean_n = acc(k) / measure_len;
    result.mean_jobs[static_cast<size_t>(k)] = mean_n;
    // Normalized so a lone job is served at rate 1: gamma = lambda max_j a_kj
    // / (E[n_k] mu_k); zero population reports the zero-load rate 1.
    result.gamma[static_cast<size_t>(k)] =
        mean_n > 0 ? c.lambda * c.dominant() / (mean_n * c.mu()) : 1.0;
  }
  return result;
}

PermanentJobResult simulate_permanent_job(const PermanentJobParams& params) {
  if (!(params.alpha > 0 && params.alpha < 1)) {
    throw ValidationError("alpha must lie in (0,1)");
  }
  if (!(params.beta >= params.alpha && params.beta <= 1.0)) {
    throw ValidationError("claimed requirement must lie in [alpha, 1]");
  }
  if (!(params.rho2 >= 0)) throw ValidationError("rho2 must be non-negative");
  if (!(params.horizon > 0)) throw ValidationError("horizon must be positive");
  const double warmup =
      params.warmup >= 0 ? params.warmup : 0.1 * params.horizon;
  if (warmup >= params.horizon) throw ValidationError("warmup must precede horizon");

  const double lambda2 = params.rho2;  // mu2 = 1
  auto phi1 = [&](long n) {
    if (params.policy == PolicyKind::Pf) {
      return permanent_job_rate(n, params.alpha, params.beta);
    }
    // DRF: equal fill until resource 2 saturates at 1/(n + beta).
    return n == 0 ? 1.0 : 1.0 / (static_cast<double>(n) + params.beta);
  };

  Rng rng(params.seed);
  long n = 0;
  double t = 0.0;
  double acc_phi = 0.0;
  double acc_n = 0.0;
  PermanentJobResult result;
  const double measure_len = params.horizon - warmup;
  while (t < params.horizon) {
    const double death = n > 0 ? 1.0 - params.beta * phi1(n) : 0.0;
    const double total = lambda2 + death;
    const double dt = rng.exponential(total);
    const double lo = std::max(t, warmup);
    const double hi = std::min(t + dt, params.horizon);
    if (hi > lo) {
      acc_phi += phi1(n) * (hi - lo);
      acc_n += static_cast<double>(n) * (hi - lo);
    }
    t += dt;
    if (t >= params.horizon) break;
    if (rng.uniform01() * total < lambda2) {
      ++n;
    } else {
      --n;
    }
    ++result.events;
  }
  result.gamma1 = acc_phi / measure_len;
  result.mean_competitors = acc_n / measure_len;
  return result;
}

}  // namespace fairshare
