#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fairshare/parallel.hpp"
#include "fairshare/rng.hpp"
#include "fairshare/scenario.hpp"
#include "fairshare/stats.hpp"

namespace fairshare {

namespace {

std::uint64_t fnv1a_str(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// Traffic classes for one variant: claimed rows drive the allocation, true
// rows fix the arrival rates so the x-axis stays the true resource-1 load.
std::vector<TrafficClass> variant_classes(const ScenarioConfig& cfg,
                                          const std::string& variant,
                                          double load, double* lambda_total) {
  double coeff = 0.0;
  for (const auto& c : cfg.classes) {
    double a1 = c.demand(0);
    if (cfg.simulator == ScenarioConfig::Simulator::Task) a1 /= cfg.capacity(0);
    coeff += c.fraction * c.sigma * c.tau * a1;
  }
  if (!(coeff > 0)) throw ConfigError(cfg.name + ": no load on resource 1");
  const double lambda = load / coeff;
  if (lambda_total != nullptr) *lambda_total = lambda;

  std::vector<TrafficClass> classes;
  for (const auto& c : cfg.classes) {
    TrafficClass tc;
    tc.lambda = lambda * c.fraction;
    tc.sigma = c.sigma;
    tc.tau = c.tau;
    Eigen::RowVectorXd row = c.demand;
    const auto claim = c.claims.find(variant);
    if (claim != c.claims.end()) row = claim->second;
    if (cfg.simulator == ScenarioConfig::Simulator::Task) {
      for (Index j = 0; j < row.size(); ++j) row(j) /= cfg.capacity(j);
    }
    tc.demand = row;
    classes.push_back(tc);
  }
  return classes;
}

struct Point {
  std::string variant;
  size_t policy_index;
  size_t load_index;
};

}  // namespace

std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto variants = cfg.variant_names();
  const size_t policy_count =
      cfg.simulator == ScenarioConfig::Simulator::Permanent ? 1
                                                            : cfg.policies.size();

  std::vector<Point> points;
  for (const auto& v : variants) {
    for (size_t p = 0; p < policy_count; ++p) {
      for (size_t l = 0; l < cfg.loads.size(); ++l) points.push_back({v, p, l});
    }
  }

  const size_t K =
      cfg.simulator == ScenarioConfig::Simulator::Permanent ? 1 : cfg.classes.size();
  const size_t reps = static_cast<size_t>(cfg.replications);
  // gamma sample per (point, class, replication)
  std::vector<double> samples(points.size() * K * reps, 0.0);
  std::vector<char> unstable(points.size(), 0);

  auto run_one = [&](size_t task_index) {
    const size_t point_index = task_index / reps;
    const size_t rep = task_index % reps;
    const Point& pt = points[point_index];
    const double load = cfg.loads[pt.load_index];
    const std::string label = cfg.name + "|" + pt.variant + "|" +
                              std::to_string(pt.policy_index) + "|" +
                              std::to_string(pt.load_index);
    const std::uint64_t seed = Rng::derive(cfg.seed, fnv1a_str(label), rep);

    if (cfg.simulator == ScenarioConfig::Simulator::Permanent) {
      double beta = 0.0;
      for (const auto& [name, b] : cfg.perm_betas) {
        if (name == pt.variant) beta = b;
      }
      PermanentJobParams params;
      params.alpha = cfg.perm_alpha;
      params.beta = beta;
      params.rho2 = load;
      params.policy = cfg.policies.empty() ? PolicyKind::Pf : cfg.policies[0].kind;
      params.horizon = cfg.events / (2.0 * std::max(load, 0.05));
      params.warmup = cfg.warmup_fraction * params.horizon;
      params.seed = seed;
      const auto result = simulate_permanent_job(params);
      samples[(point_index * K + 0) * reps + rep] = result.gamma1;
      return;
    }

    double lambda_total = 0.0;
    const auto classes = variant_classes(cfg, pt.variant, load, &lambda_total);
    if (cfg.simulator == ScenarioConfig::Simulator::Fluid) {
      FluidParams params;
      params.horizon = cfg.events / (2.0 * lambda_total);
      params.warmup = cfg.warmup_fraction * params.horizon;
      params.seed = seed;
      const auto result = simulate_fluid(classes, cfg.policies[pt.policy_index], params);
      if (!result.stable) unstable[point_index] = 1;
      for (size_t k = 0; k < K; ++k) {
        samples[(point_index * K + k) * reps + rep] = result.gamma[k];
      }
      return;
    }

    // Task simulator: rebuild absolute demands for this variant.
    std::vector<TaskClass> task_classes;
    for (size_t k = 0; k < cfg.classes.size(); ++k) {
      TaskClass tc;
      tc.lambda = classes[k].lambda;
      tc.tasks_per_job = static_cast<long>(std::llround(cfg.classes[k].sigma));
      tc.demand_abs = classes[k].demand;
      for (Index j = 0; j < tc.demand_abs.size(); ++j) {
        tc.demand_abs(j) *= cfg.capacity(j);
      }
      task_classes.push_back(tc);
    }
    TaskSimParams params;
    params.horizon = cfg.jobs / lambda_total;
    params.warmup = cfg.warmup_fraction * params.horizon;
    params.seed = seed;
    TaskDistribution dist = cfg.distribution;
    dist.mean = cfg.classes.front().tau;
    const auto result = simulate_tasks(task_classes, ClusterCapacity{cfg.capacity},
                                       cfg.policies[pt.policy_index], dist, params);
    if (!result.stable) unstable[point_index] = 1;
    for (size_t k = 0; k < K; ++k) {
      samples[(point_index * K + k) * reps + rep] = result.gamma[k];
    }
  };

  parallel_for(points.size() * reps, cfg.threads, run_one);

  std::vector<ResultRow> rows;
  for (size_t pi = 0; pi < points.size(); ++pi) {
    const Point& pt = points[pi];
    for (size_t k = 0; k < K; ++k) {
      std::vector<double> xs(reps);
      for (size_t r = 0; r < reps; ++r) xs[r] = samples[(pi * K + k) * reps + r];
      const Estimate est = summarize(xs);
      ResultRow row;
      row.scenario = pt.variant.empty() ? cfg.name : cfg.name + ":" + pt.variant;
      row.policy = cfg.simulator == ScenarioConfig::Simulator::Permanent
                       ? (cfg.policies.empty() ? "pf" : policy_label(cfg.policies[0]))
                       : policy_label(cfg.policies[pt.policy_index]);
      row.class_id = static_cast<int>(k) + 1;
      row.load = cfg.loads[pt.load_index];
      row.gamma = est.mean;
      row.ci = est.ci_half;
      row.reps = static_cast<int>(reps);
      row.seed = cfg.seed;
      row.unstable = unstable[pi] != 0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string csv_header() {
  return "scenario,policy,class,load,gamma,ci,reps,seed,unstable";
}

std::string to_csv(const std::vector<ResultRow>& rows, const ScenarioConfig& cfg) {
  std::ostringstream out;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  out << "# " << kToolVersion << "\n";
  out << "# scenario: " << cfg.name << "\n";
  out << "# config-hash: " << hash << "\n";
  out << "# master-seed: " << cfg.seed << "\n";
  out << csv_header() << "\n";
  for (const auto& r : rows) {
    out << r.scenario << "," << r.policy << "," << r.class_id << ","
        << fmt6(r.load) << "," << fmt6(r.gamma) << "," << fmt6(r.ci) << ","
        << r.reps << "," << r.seed << "," << (r.unstable ? 1 : 0) << "\n";
  }
  return out.str();
}

void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows,
                    const ScenarioConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << to_csv(rows, cfg);
}

}  // namespace fairshare
