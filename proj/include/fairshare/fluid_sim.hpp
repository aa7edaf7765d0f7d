#pragma once

#include <cstdint>
#include <vector>

#include "fairshare/analytic.hpp"
#include "fairshare/kkt.hpp"
#include "fairshare/traffic.hpp"
#include "fairshare/water_filling.hpp"

namespace fairshare {

struct Policy {
  PolicyKind kind = PolicyKind::Drf;
  double alpha = 1.0;  // only for PolicyKind::Alpha

  static Policy drf() { return {PolicyKind::Drf, 1.0}; }
  static Policy pf() { return {PolicyKind::Pf, 1.0}; }
  static Policy alpha_fair(double a) { return {PolicyKind::Alpha, a}; }
};

struct FluidParams {
  double horizon = 0.0;       // simulated time
  double warmup = -1.0;       // < 0 picks 10% of the horizon
  std::uint64_t seed = 1;
  double solver_tol = 1e-7;   // per-event KKT tolerance (PF / alpha-fair)
  long solver_max_iters = 200000;
};

struct SimResult {
  std::vector<double> mean_jobs;   // time-averaged E[n_k]
  std::vector<double> gamma;       // normalized mean service rates
  double time = 0.0;               // measured window length
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  bool stable = true;              // capacity-region check on the inputs
  double max_usage = 0.0;          // worst per-event resource usage seen
};

// Continuous-time Markov simulation of the job population under fluid
// sharing. The allocation is recomputed after every arrival and departure
// from the per-class aggregated problem (one row per class, multiplicity
// n_k); PF multipliers warm-start from the previous event.
SimResult simulate_fluid(const std::vector<TrafficClass>& classes, Policy policy,
                         const FluidParams& params);

// Birth-death simulation of the population competing with one permanent job
// that claims (1, beta) per task while true requirements are (1, alpha) and
// the competitors need (alpha, 1). Returns the time-average of the permanent
// job's task volume phi1(n); the stationary oracle gamma1_pf computes the
// same quantity analytically.
struct PermanentJobParams {
  double alpha = 0.1;
  double beta = 0.1;
  double rho2 = 0.5;
  PolicyKind policy = PolicyKind::Pf;
  double horizon = 0.0;
  double warmup = -1.0;
  std::uint64_t seed = 1;
};

struct PermanentJobResult {
  double gamma1 = 0.0;
  double mean_competitors = 0.0;
  std::uint64_t events = 0;
};

PermanentJobResult simulate_permanent_job(const PermanentJobParams& params);

}  // namespace fairshare
