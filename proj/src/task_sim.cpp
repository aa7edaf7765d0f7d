#include "fairshare/task_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "fairshare/rng.hpp"

namespace fairshare {

namespace {

constexpr std::int64_t kUnitScale = 1000000;  // micro-units for exact usage

std::int64_t to_units(double amount, const char* what) {
  const double scaled = amount * static_cast<double>(kUnitScale);
  const double rounded = std::nearbyint(scaled);
  if (std::abs(scaled - rounded) > 1e-6 * std::max(1.0, std::abs(scaled))) {
    throw ValidationError(std::string(what) +
                          " must be representable in 1e-6 resource units");
  }
  return static_cast<std::int64_t>(rounded);
}

struct Job {
  Index class_id;
  long queued;
  long running;
  long remaining;  // queued + running
  std::uint64_t seq;
};

struct Event {
  double time;
  int type;  // 0 arrival (a = class), 1 completion (a = job slot)
  Index a;

  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    return type > other.type;  // arrivals before completions on ties
  }
};

double sample_task(Rng& rng, const TaskDistribution& dist) {
  if (dist.kind == TaskDistribution::Kind::Erlang && dist.stages > 1) {
    return rng.erlang(dist.stages, dist.mean);
  }
  return rng.exponential(1.0 / dist.mean);
}

}  // namespace

std::size_t most_deprived(const std::vector<DeprivationEntry>& jobs,
                          const DemandMatrix<double>& a_norm, PolicyKind policy,
                          const MultiplierVector& nu) {
  if (jobs.empty()) throw ValidationError("most_deprived on empty job set");
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  std::uint64_t best_seq = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    double price;
    if (policy == PolicyKind::Drf) {
      price = a_norm.dominant_requirement(job.class_id);
    } else {
      price = a_norm.coeffs().row(job.class_id) * nu;
    }
    const double value = static_cast<double>(job.running) * price;
    if (value < best_value ||
        (value == best_value && job.arrival_seq < best_seq)) {
      best_value = value;
      best_seq = job.arrival_seq;
      best = i;
    }
  }
  return best;
}

TaskSimResult simulate_tasks(const std::vector<TaskClass>& classes,
                             const ClusterCapacity& capacity, Policy policy,
                             const TaskDistribution& dist,
                             const TaskSimParams& params) {
  if (classes.empty()) throw ValidationError("at least one task class required");
  if (policy.kind == PolicyKind::Alpha) {
    throw ValidationError("task scheduler supports DRF and PF policies");
  }
  if (!(params.horizon > 0)) throw ValidationError("horizon must be positive");
  const double warmup =
      params.warmup >= 0 ? params.warmup : 0.1 * params.horizon;
  if (warmup >= params.horizon) throw ValidationError("warmup must precede horizon");

  const Index K = static_cast<Index>(classes.size());
  const Index J = capacity.units.size();
  for (Index j = 0; j < J; ++j) {
    if (!(capacity.units(j) > 0)) {
      throw ValidationError("capacities must be strictly positive");
    }
  }

  // Normalized rows drive the deprivation indices and the fluid relaxation;
  // integer micro-units keep the capacity accounting exact.
  Eigen::MatrixXd raw(K, J);
  std::vector<std::vector<std::int64_t>> demand_units(static_cast<size_t>(K));
  std::vector<std::int64_t> cap_units(static_cast<size_t>(J));
  for (Index j = 0; j < J; ++j) {
    cap_units[static_cast<size_t>(j)] = to_units(capacity.units(j), "capacity");
  }
  for (Index k = 0; k < K; ++k) {
    const auto& c = classes[static_cast<size_t>(k)];
    if (c.demand_abs.size() != J) {
      throw ValidationError("class demand length does not match capacity");
    }
    if (c.tasks_per_job < 1) throw ValidationError("tasks per job must be >= 1");
    raw.row(k) = c.demand_abs;
    auto& row = demand_units[static_cast<size_t>(k)];
    row.resize(static_cast<size_t>(J));
    for (Index j = 0; j < J; ++j) {
      row[static_cast<size_t>(j)] = to_units(c.demand_abs(j), "task demand");
      if (row[static_cast<size_t>(j)] > cap_units[static_cast<size_t>(j)]) {
        throw ValidationError("task demand exceeds total capacity");
      }
    }
  }
  DemandMatrix<double> a_norm =
      normalize_demands<double>(raw, capacity.units);

  std::vector<TrafficClass> fluid_classes(static_cast<size_t>(K));
  for (Index k = 0; k < K; ++k) {
    auto& fc = fluid_classes[static_cast<size_t>(k)];
    const auto& c = classes[static_cast<size_t>(k)];
    fc.lambda = c.lambda;
    fc.sigma = static_cast<double>(c.tasks_per_job);
    fc.tau = dist.mean;
    fc.demand = a_norm.coeffs().row(k);
  }

  WarmKktSolver pf_solver(a_norm, 1.0, params.solver_tol,
                          params.solver_max_iters);

  TaskSimResult result;
  result.seed = params.seed;
  result.stable = capacity_region_check(fluid_classes).stable;

  Rng rng(params.seed);
  std::vector<Job> jobs;          // active jobs, swap-removed on completion
  std::vector<std::size_t> slot_of_seq;  // arrival seq -> slot in `jobs`
  constexpr std::size_t kGone = static_cast<std::size_t>(-1);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(K);
  std::vector<std::int64_t> used(static_cast<size_t>(J), 0);
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
  std::uint64_t arrival_seq = 0;

  for (Index k = 0; k < K; ++k) {
    const double lam = classes[static_cast<size_t>(k)].lambda;
    if (lam > 0) events.push({rng.exponential(lam), 0, k});
  }

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(K);
  std::vector<DeprivationEntry> entries;
  MultiplierVector nu = MultiplierVector::Zero(J);

  double now = 0.0;
  auto account = [&](double until) {
    const double lo = std::max(now, warmup);
    const double hi = std::min(until, params.horizon);
    if (hi > lo) acc += counts * (hi - lo);
  };

  auto fits = [&](Index k) {
    const auto& row = demand_units[static_cast<size_t>(k)];
    for (Index j = 0; j < J; ++j) {
      if (used[static_cast<size_t>(j)] + row[static_cast<size_t>(j)] >
          cap_units[static_cast<size_t>(j)]) {
        return false;
      }
    }
    return true;
  };

  auto note_peak = [&]() {
    for (Index j = 0; j < J; ++j) {
      const double frac = static_cast<double>(used[static_cast<size_t>(j)]) /
                          static_cast<double>(cap_units[static_cast<size_t>(j)]);
      result.peak_usage = std::max(result.peak_usage, frac);
    }
  };

  std::vector<std::size_t> entry_slots;
  auto schedule = [&]() {
    if (policy.kind == PolicyKind::Pf && !jobs.empty()) {
      pf_solver.solve(counts);
      nu = pf_solver.multipliers();
    }
    for (;;) {
      entries.clear();
      entry_slots.clear();
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].queued > 0) {
          entries.push_back({jobs[i].running, jobs[i].class_id, jobs[i].seq});
          entry_slots.push_back(i);
        }
      }
      if (entries.empty()) return;
      const std::size_t pick = most_deprived(entries, a_norm, policy.kind, nu);
      Job& job = jobs[entry_slots[pick]];
      if (!fits(job.class_id)) return;  // frozen until the state changes
      const auto& row = demand_units[static_cast<size_t>(job.class_id)];
      for (Index j = 0; j < J; ++j) used[static_cast<size_t>(j)] += row[static_cast<size_t>(j)];
      --job.queued;
      ++job.running;
      ++result.launches;
      note_peak();
      events.push({now + sample_task(rng, dist), 1, static_cast<Index>(job.seq)});
    }
  };

  while (!events.empty()) {
    Event ev = events.top();
    if (ev.time >= params.horizon) break;
    events.pop();
    account(ev.time);
    now = ev.time;
    ++result.events;

    if (ev.type == 0) {
      const Index k = ev.a;
      const auto& c = classes[static_cast<size_t>(k)];
      slot_of_seq.push_back(jobs.size());
      jobs.push_back({k, c.tasks_per_job, 0, c.tasks_per_job, arrival_seq++});
      counts(k) += 1;
      events.push({now + rng.exponential(c.lambda), 0, k});
      schedule();
    } else {
      const std::uint64_t seq = static_cast<std::uint64_t>(ev.a);
      const std::size_t slot = slot_of_seq[seq];
      if (slot == kGone) continue;
      Job& job = jobs[slot];
      const auto& row = demand_units[static_cast<size_t>(job.class_id)];
      for (Index j = 0; j < J; ++j) used[static_cast<size_t>(j)] -= row[static_cast<size_t>(j)];
      --job.running;
      --job.remaining;
      if (job.remaining == 0) {
        counts(job.class_id) -= 1;
        slot_of_seq[seq] = kGone;
        if (slot != jobs.size() - 1) {
          slot_of_seq[jobs.back().seq] = slot;
          jobs[slot] = jobs.back();
        }
        jobs.pop_back();
      }
      schedule();
    }
  }
  account(params.horizon);

  const double measure_len = params.horizon - warmup;
  result.time = measure_len;
  result.mean_jobs.resize(static_cast<size_t>(K));
  result.gamma.resize(static_cast<size_t>(K));
  for (Index k = 0; k < K; ++k) {
    const auto& fc = fluid_classes[static_cast<size_t>(k)];
    const double mean_n = acc(k) / measure_len;
    result.mean_jobs[static_cast<size_t>(k)] = mean_n;
    result.gamma[static_cast<size_t>(k)] =
        mean_n > 0 ? fc.lambda * fc.dominant() / (mean_n * fc.mu()) : 1.0;
  }
  return result;
}

std::vector<long> lone_job_drain_profile(long sigma, long slots,
                                         const TaskDistribution& dist,
                                         std::uint64_t seed) {
  if (sigma < slots || slots < 1) {
    throw ValidationError("drain requires sigma >= slots >= 1");
  }
  Rng rng(seed);
  std::priority_queue<double, std::vector<double>, std::greater<double>> heap;
  for (long i = 0; i < slots; ++i) heap.push(sample_task(rng, dist));
  long launched = slots;
  std::vector<long> profile;
  profile.reserve(static_cast<size_t>(sigma));
  while (!heap.empty()) {
    const double t = heap.top();
    heap.pop();
    if (launched < sigma) {
      heap.push(t + sample_task(rng, dist));
      ++launched;
    }
    profile.push_back(static_cast<long>(heap.size()));
  }
  return profile;
}

double lone_job_drain_rate(long sigma, long slots, const TaskDistribution& dist,
                           int replications, std::uint64_t seed) {
  if (sigma < slots || slots < 1) {
    throw ValidationError("drain requires sigma >= slots >= 1");
  }
  if (replications < 1) throw ValidationError("need at least one replication");

  double total_time = 0.0;
  for (int r = 0; r < replications; ++r) {
    Rng rng(Rng::derive(seed, 0x10ad, static_cast<std::uint64_t>(r)));
    std::priority_queue<double, std::vector<double>, std::greater<double>> heap;
    for (long i = 0; i < slots; ++i) heap.push(sample_task(rng, dist));
    long launched = slots;
    double t = 0.0;
    while (!heap.empty()) {
      t = heap.top();
      heap.pop();
      if (launched < sigma) {
        heap.push(t + sample_task(rng, dist));
        ++launched;
      }
    }
    total_time += t;
  }
  const double fluid_time =
      static_cast<double>(sigma) * dist.mean / static_cast<double>(slots);
  return fluid_time / (total_time / static_cast<double>(replications));
}

}  // namespace fairshare
