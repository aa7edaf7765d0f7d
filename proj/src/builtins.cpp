#include <algorithm>
#include <cmath>

#include "fairshare/analytic.hpp"
#include "fairshare/scenario.hpp"

namespace fairshare {

namespace {

std::vector<double> sweep_loads() {
  std::vector<double> loads;
  for (int i = 0; i < 12; ++i) {
    loads.push_back(0.05 + static_cast<double>(i) * 0.9 / 11.0);
  }
  return loads;
}

Eigen::RowVectorXd row2(double a, double b) {
  Eigen::RowVectorXd r(2);
  r << a, b;
  return r;
}

ClassConfig fluid_class(double fraction, double a1, double a2) {
  ClassConfig c;
  c.fraction = fraction;
  c.sigma = 1.0;
  c.tau = 1.0;
  c.demand = row2(a1, a2);
  return c;
}

ScenarioConfig fluid_base(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.simulator = ScenarioConfig::Simulator::Fluid;
  cfg.policies = {Policy::drf(), Policy::pf()};
  cfg.loads = sweep_loads();
  cfg.replications = 10;
  cfg.events = 200000;
  return cfg;
}

// Two-class mixes behind Figures 1 and 2.
ScenarioConfig make_two_class(const std::string& name, double f1, double a12,
                              double a21) {
  ScenarioConfig cfg = fluid_base(name);
  cfg.classes = {fluid_class(f1, 1.0, a12), fluid_class(1.0 - f1, a21, 1.0)};
  return cfg;
}

// Four-class mix behind Figure 3.
ScenarioConfig make_four_class(const std::string& name, double f_ram_heavy) {
  ScenarioConfig cfg = fluid_base(name);
  const double f_cpu = (1.0 - 2.0 * f_ram_heavy) / 2.0;
  cfg.classes = {fluid_class(f_cpu, 1.0, 0.1), fluid_class(f_cpu, 1.0, 0.5),
                 fluid_class(f_ram_heavy, 0.5, 1.0),
                 fluid_class(f_ram_heavy, 0.1, 1.0)};
  return cfg;
}

void add_claim_variants(ScenarioConfig& cfg, double alpha) {
  auto& c1 = cfg.classes.front();
  c1.claims["truthful"] = row2(1.0, alpha);
  c1.claims["opt-n1"] = row2(1.0, optimal_false_claim(1, alpha));
  c1.claims["opt-n2"] = row2(1.0, optimal_false_claim(2, alpha));
  c1.claims["opt-n5"] = row2(1.0, optimal_false_claim(5, alpha));
}

ScenarioConfig make_fig4() {
  ScenarioConfig cfg;
  cfg.name = "fig4";
  cfg.simulator = ScenarioConfig::Simulator::Permanent;
  cfg.policies = {Policy::pf()};
  cfg.replications = 10;
  cfg.events = 200000;
  cfg.perm_alpha = 0.1;
  cfg.perm_betas = {{"truthful", 0.1},
                    {"opt-n1", optimal_false_claim(1, 0.1)},
                    {"opt-n2", optimal_false_claim(2, 0.1)},
                    {"opt-n5", optimal_false_claim(5, 0.1)}};
  for (int i = 1; i <= 9; ++i) cfg.loads.push_back(0.1 * i);
  return cfg;
}

ScenarioConfig make_fig5(const std::string& name, Policy policy) {
  ScenarioConfig cfg = make_two_class(name, 0.5, 0.1, 0.1);
  cfg.policies = {policy};
  add_claim_variants(cfg, 0.1);
  return cfg;
}

ScenarioConfig make_fig6(const std::string& name, TaskDistribution dist) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.simulator = ScenarioConfig::Simulator::Task;
  cfg.policies = {Policy::drf(), Policy::pf()};
  cfg.loads = sweep_loads();
  cfg.replications = 10;
  cfg.jobs = 1000;
  cfg.capacity = Eigen::Vector2d(100.0, 100.0);
  cfg.distribution = dist;
  ClassConfig c1;
  c1.fraction = 0.75;
  c1.sigma = 500;
  c1.tau = 0.2;
  c1.demand = row2(1.0, 0.1);
  ClassConfig c2 = c1;
  c2.fraction = 0.25;
  c2.demand = row2(0.1, 1.0);
  cfg.classes = {c1, c2};
  return cfg;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"fig1a", "fig1b", "fig2a",   "fig2b",   "fig3a",   "fig3b",
          "fig4",  "fig5drf", "fig5pf", "fig6exp", "fig6erlang"};
}

bool is_builtin_scenario(const std::string& name) {
  const auto names = builtin_scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "fig1a") return make_two_class("fig1a", 0.5, 0.1, 0.1);
  if (name == "fig1b") return make_two_class("fig1b", 0.75, 0.1, 0.1);
  if (name == "fig2a") return make_two_class("fig2a", 0.5, 0.1, 0.5);
  if (name == "fig2b") return make_two_class("fig2b", 0.75, 0.1, 0.5);
  if (name == "fig3a") return make_four_class("fig3a", 0.25);
  if (name == "fig3b") return make_four_class("fig3b", 0.125);
  if (name == "fig4") return make_fig4();
  if (name == "fig5drf") return make_fig5("fig5drf", Policy::drf());
  if (name == "fig5pf") return make_fig5("fig5pf", Policy::pf());
  if (name == "fig6exp") {
    return make_fig6("fig6exp", TaskDistribution::exponential(0.2));
  }
  if (name == "fig6erlang") {
    return make_fig6("fig6erlang", TaskDistribution::erlang(20, 0.2));
  }
  throw ConfigError("unknown built-in scenario: " + name);
}

}  // namespace fairshare
