// Experiment runner: lists and dumps scenario configs, runs sweeps to CSV,
// and verifies the acceptance criteria against the simulators and oracles.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairshare/scenario.hpp"
#include "fairshare/verify.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitAcceptance = 2;
constexpr int kExitSolver = 3;

fairshare::ScenarioConfig resolve_scenario(const std::string& ref) {
  if (fairshare::is_builtin_scenario(ref)) return fairshare::builtin_scenario(ref);
  return fairshare::load_scenario_file(ref);
}

int cmd_list() {
  for (const auto& name : fairshare::builtin_scenario_names()) {
    std::cout << name << "\n";
  }
  return 0;
}

int cmd_dump(const std::string& name) {
  std::cout << fairshare::dump_scenario(resolve_scenario(name));
  return 0;
}

int cmd_run(const std::string& ref, const std::string& out, long seed, int reps,
            unsigned threads) {
  fairshare::ScenarioConfig cfg = resolve_scenario(ref);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (reps > 0) cfg.replications = reps;
  if (threads > 0) cfg.threads = threads;
  const auto rows = fairshare::run_scenario(cfg);
  if (out.empty() || out == "-") {
    std::cout << fairshare::to_csv(rows, cfg);
  } else {
    fairshare::write_csv_file(out, rows, cfg);
    std::cerr << cfg.name << ": " << rows.size() << " rows -> " << out << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& profile, const std::string& criteria_path,
               long seed, unsigned threads, const std::string& out_dir) {
  fairshare::VerifyOptions options;
  options.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : 1;
  options.threads = threads;
  options.output_dir = out_dir;
  if (profile != "default") {
    throw fairshare::ConfigError("unknown verify profile: " + profile +
                                 " (only 'default' is defined)");
  }

  std::vector<std::pair<std::string, fairshare::Overrides>> plan;
  if (criteria_path.empty()) {
    for (const auto& name : fairshare::criteria_names()) {
      if (name != "end-to-end") plan.emplace_back(name, fairshare::Overrides{});
    }
  } else {
    std::ifstream in(criteria_path);
    if (!in) {
      throw fairshare::ConfigError("cannot open criteria file: " + criteria_path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    plan = fairshare::parse_criteria_file(buf.str(), criteria_path);
  }

  std::vector<fairshare::CriterionResult> done;
  bool all_pass = true;
  for (const auto& [name, overrides] : plan) {
    const auto result = fairshare::run_criterion(name, options, overrides, done);
    std::printf("%s %-24s (%.1fs)\n", result.pass ? "PASS" : "FAIL",
                result.name.c_str(), result.seconds);
    for (const auto& check : result.checks) {
      std::printf("%s\n", fairshare::format_check(check).c_str());
    }
    all_pass = all_pass && result.pass;
    done.push_back(result);
  }
  const size_t passed = static_cast<size_t>(std::count_if(
      done.begin(), done.end(), [](const auto& r) { return r.pass; }));
  std::printf("%s: %zu/%zu criteria passed\n", all_pass ? "PASS" : "FAIL", passed,
              done.size());
  return all_pass ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-resource fair-sharing experiment runner"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

  std::string dump_name;
  auto* dump = app.add_subcommand("dump-config", "Print a scenario config");
  dump->add_option("name", dump_name, "Built-in name or config file")->required();

  std::string run_ref, run_out;
  long run_seed = -1;
  int run_reps = 0;
  unsigned run_threads = 0;
  auto* run = app.add_subcommand("run", "Run a scenario sweep and emit CSV");
  run->add_option("config", run_ref, "Built-in name or config file")->required();
  run->add_option("--out", run_out, "Output CSV path ('-' for stdout)");
  run->add_option("--seed", run_seed, "Master seed override");
  run->add_option("--reps", run_reps, "Replication count override");
  run->add_option("--threads", run_threads, "Worker threads (0 = all cores)");

  std::string verify_profile = "default", verify_criteria, verify_out;
  long verify_seed = 1;
  unsigned verify_threads = 0;
  auto* verify = app.add_subcommand("verify", "Evaluate acceptance criteria");
  verify->add_option("config", verify_profile, "Verify profile (default)");
  verify->add_option("--criteria", verify_criteria, "Criteria file");
  verify->add_option("--seed", verify_seed, "Master seed");
  verify->add_option("--threads", verify_threads, "Worker threads (0 = all cores)");
  verify->add_option("--out", verify_out, "Directory for end-to-end CSV output");

  try {
    app.parse(argc, argv);
    if (list->parsed()) return cmd_list();
    if (dump->parsed()) return cmd_dump(dump_name);
    if (run->parsed()) return cmd_run(run_ref, run_out, run_seed, run_reps, run_threads);
    if (verify->parsed()) {
      return cmd_verify(verify_profile, verify_criteria, verify_seed,
                        verify_threads, verify_out);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  } catch (const fairshare::SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (residual " << e.residual()
              << ")\n";
    return kExitSolver;
  } catch (const fairshare::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
