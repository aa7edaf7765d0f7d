// Acceptance suite: runs every verification criterion at its pinned
// tolerance with master seed 1 and prints one pass/fail line per criterion.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "fairshare/verify.hpp"

int main(int argc, char** argv) {
  fairshare::VerifyOptions options;
  options.seed = 1;
  options.threads = 0;
  options.output_dir =
      (std::filesystem::temp_directory_path() / "fairshare-acceptance").string();
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      options.seed = static_cast<std::uint64_t>(std::atoll(argv[++i]));
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<fairshare::CriterionResult> done;
  bool all_pass = true;
  int index = 0;
  for (const auto& name : fairshare::criteria_names()) {
    fairshare::Overrides overrides;
    if (quick) {
      // Reduced horizons for smoke runs; the pinned tolerances stay intact.
      overrides["events"] = 30000;
      overrides["reps"] = 4;
      overrides["jobs"] = 300;
      if (name == "static-properties") overrides["instances"] = 200;
      if (name == "task-zero-load") overrides["reps"] = 800;
    }
    fairshare::CriterionResult result;
    try {
      result = fairshare::run_criterion(name, options, overrides, done);
    } catch (const std::exception& e) {
      result.name = name;
      result.pass = false;
      result.checks.push_back({std::string("exception: ") + e.what(), 0, 0, 0,
                               "abs", false});
    }
    std::printf("[%2d/11] %s %-24s (%.1fs)\n", ++index,
                result.pass ? "PASS" : "FAIL", result.name.c_str(),
                result.seconds);
    for (const auto& check : result.checks) {
      std::printf("%s\n", fairshare::format_check(check).c_str());
    }
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
    done.push_back(result);
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int passed = 0;
  for (const auto& r : done) passed += r.pass ? 1 : 0;
  std::printf("acceptance: %d/%zu criteria passed in %.1fs\n", passed,
              done.size(), elapsed);
  return all_pass ? 0 : 1;
}
