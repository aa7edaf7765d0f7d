#pragma once

#include <cstdint>
#include <vector>

#include "fairshare/fluid_sim.hpp"
#include "fairshare/traffic.hpp"

namespace fairshare {

struct TaskDistribution {
  enum class Kind { Exponential, Erlang };
  Kind kind = Kind::Exponential;
  int stages = 1;      // Erlang shape; 1 collapses to exponential
  double mean = 1.0;   // mean task service time tau

  static TaskDistribution exponential(double mean) {
    return {Kind::Exponential, 1, mean};
  }
  static TaskDistribution erlang(int stages, double mean) {
    return {Kind::Erlang, stages, mean};
  }
};

// Absolute per-resource capacities (e.g. 100 CPU units, 100 RAM units).
struct ClusterCapacity {
  Eigen::VectorXd units;
};

// One job class at task granularity: Poisson arrivals, a fixed number of
// tasks per job, absolute per-task requirements.
struct TaskClass {
  double lambda = 0.0;
  long tasks_per_job = 1;         // sigma
  Eigen::RowVectorXd demand_abs;  // per-task absolute amounts A_kj
};

// Running-task state exposed to the deprivation index.
struct DeprivationEntry {
  long running = 0;       // integer tasks in progress
  Index class_id = 0;
  std::uint64_t arrival_seq = 0;
};

// Index of the most deprived job: DRF minimizes running * max_j a_ij, PF
// minimizes running * (a_i . nu). Ties break on (index value, arrival order,
// position). a_norm holds the normalized per-class demand rows.
std::size_t most_deprived(const std::vector<DeprivationEntry>& jobs,
                          const DemandMatrix<double>& a_norm, PolicyKind policy,
                          const MultiplierVector& nu);

struct TaskSimParams {
  double horizon = 0.0;
  double warmup = -1.0;          // < 0 picks 10% of horizon
  std::uint64_t seed = 1;
  double solver_tol = 1e-7;      // PF multiplier tolerance per event
  long solver_max_iters = 200000;
};

struct TaskSimResult {
  std::vector<double> mean_jobs;
  std::vector<double> gamma;     // normalized service rates
  double time = 0.0;
  std::uint64_t events = 0;
  std::uint64_t launches = 0;
  std::uint64_t seed = 0;
  bool stable = true;
  double peak_usage = 0.0;       // largest capacity fraction reached
};

// Discrete-task scheduler: on every arrival or task completion the scheduler
// repeatedly launches one task of the most deprived job while it fits; when
// the most deprived job's task does not fit, the pass stops (strict freeze,
// no backfilling).
TaskSimResult simulate_tasks(const std::vector<TaskClass>& classes,
                             const ClusterCapacity& capacity, Policy policy,
                             const TaskDistribution& dist,
                             const TaskSimParams& params);

// Service time of a single job draining through an otherwise empty cluster;
// `slots` tasks run at once until the queue empties. Returns the normalized
// service rate (fluid drain time over the mean measured drain time).
double lone_job_drain_rate(long sigma, long slots, const TaskDistribution& dist,
                           int replications, std::uint64_t seed);

// Tasks in progress immediately after each completion of one lone-job drain.
std::vector<long> lone_job_drain_profile(long sigma, long slots,
                                         const TaskDistribution& dist,
                                         std::uint64_t seed);

}  // namespace fairshare
