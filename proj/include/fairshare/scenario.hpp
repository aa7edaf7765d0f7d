#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairshare/fluid_sim.hpp"
#include "fairshare/task_sim.hpp"

namespace fairshare {

inline constexpr const char* kToolVersion = "fairshare 0.1.0";

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ClassConfig {
  double fraction = 1.0;   // share of the total arrival rate
  double sigma = 1.0;      // mean tasks per job (integer for task sims)
  double tau = 1.0;        // mean task time
  Eigen::RowVectorXd demand;              // true per-task requirements
  std::map<std::string, Eigen::RowVectorXd> claims;  // per-variant claimed rows
};

struct ScenarioConfig {
  enum class Simulator { Fluid, Task, Permanent };

  std::string name;
  Simulator simulator = Simulator::Fluid;
  std::vector<Policy> policies;
  std::vector<ClassConfig> classes;
  std::vector<double> loads;      // resource-1 loads; rho2 grid for permanent
  int replications = 10;
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1;
  unsigned threads = 0;           // 0 = hardware concurrency

  // Horizon drivers: expected events per replication (fluid / permanent) or
  // expected jobs per replication (task).
  double events = 200000;
  double jobs = 1000;

  // Task simulator extras.
  Eigen::VectorXd capacity;
  TaskDistribution distribution = TaskDistribution::exponential(1.0);

  // Permanent-job scenario extras.
  double perm_alpha = 0.1;
  std::vector<std::pair<std::string, double>> perm_betas;

  void validate() const;
  std::vector<std::string> variant_names() const;
};

// Plain-text scenario format: top-level `key = value` lines, a [sweep]
// section and one [class] section per class. parse() reports
// "<source>:<line>: message" on malformed input.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source);
ScenarioConfig load_scenario_file(const std::string& path);
std::string dump_scenario(const ScenarioConfig& config);

// Built-in scenario set reproducing the experiment suite.
std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);
bool is_builtin_scenario(const std::string& name);

struct ResultRow {
  std::string scenario;  // config name, suffixed :variant when claims exist
  std::string policy;
  int class_id = 1;      // 1-based
  double load = 0.0;
  double gamma = 0.0;
  double ci = 0.0;
  int reps = 0;
  std::uint64_t seed = 0;
  bool unstable = false;
};

std::vector<ResultRow> run_scenario(const ScenarioConfig& config);

std::string policy_label(const Policy& policy);
std::string csv_header();
std::string to_csv(const std::vector<ResultRow>& rows, const ScenarioConfig& config);
void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows,
                    const ScenarioConfig& config);

// FNV-1a of the canonical config dump; stamped into the CSV metadata.
std::uint64_t config_hash(const ScenarioConfig& config);

}  // namespace fairshare
