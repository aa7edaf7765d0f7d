#include "fairshare/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "fairshare/analytic.hpp"
#include "fairshare/kkt.hpp"
#include "fairshare/parallel.hpp"
#include "fairshare/properties.hpp"
#include "fairshare/rng.hpp"
#include "fairshare/scenario.hpp"
#include "fairshare/stats.hpp"
#include "fairshare/task_sim.hpp"
#include "fairshare/water_filling.hpp"

namespace fairshare {

namespace {

double get(const Overrides& o, const std::string& key, double fallback) {
  const auto it = o.find(key);
  return it == o.end() ? fallback : it->second;
}

void check_abs(CriterionResult& r, const std::string& what, double measured,
               double target, double tol) {
  r.checks.push_back(
      {what, measured, target, tol, "abs", std::abs(measured - target) <= tol});
}

void check_rel(CriterionResult& r, const std::string& what, double measured,
               double target, double tol) {
  r.checks.push_back({what, measured, target, tol, "rel",
                      std::abs(measured - target) <= tol * std::abs(target)});
}

void check_le(CriterionResult& r, const std::string& what, double measured,
              double bound, double slack = 0.0) {
  r.checks.push_back({what, measured, bound, slack, "le", measured <= bound + slack});
}

void check_ge(CriterionResult& r, const std::string& what, double measured,
              double bound, double slack = 0.0) {
  r.checks.push_back({what, measured, bound, slack, "ge", measured >= bound - slack});
}

void check_true(CriterionResult& r, const std::string& what, bool ok) {
  r.checks.push_back({what, ok ? 1.0 : 0.0, 1.0, 0.0, "eq", ok});
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

struct RepEstimate {
  Estimate est;
  std::vector<double> samples;
};

// Replicated fluid run for one class's normalized service rate.
std::vector<RepEstimate> fluid_gammas(const std::vector<TrafficClass>& classes,
                                      Policy policy, double events, int reps,
                                      std::uint64_t seed, const char* tag,
                                      unsigned threads) {
  double lambda_total = 0.0;
  for (const auto& c : classes) lambda_total += c.lambda;
  FluidParams params;
  params.horizon = events / (2.0 * lambda_total);
  params.seed = 0;

  const size_t K = classes.size();
  std::vector<std::vector<double>> samples(K, std::vector<double>(reps, 0.0));
  std::uint64_t stream = 0xcbf29ce484222325ULL;
  for (const char* p = tag; *p != '\0'; ++p) {
    stream ^= static_cast<unsigned char>(*p);
    stream *= 0x100000001b3ULL;
  }
  parallel_for(static_cast<size_t>(reps), threads, [&](size_t r) {
    FluidParams local = params;
    local.seed = Rng::derive(seed, stream, r);
    const SimResult result = simulate_fluid(classes, policy, local);
    for (size_t k = 0; k < K; ++k) samples[k][r] = result.gamma[k];
  });

  std::vector<RepEstimate> out(K);
  for (size_t k = 0; k < K; ++k) {
    out[k].samples = samples[k];
    out[k].est = summarize(samples[k]);
  }
  return out;
}

std::vector<TrafficClass> two_class_mix(double a12, double a21, double rho1,
                                        double rho2) {
  TrafficClass c1, c2;
  c1.lambda = rho1;
  c1.demand = Eigen::RowVectorXd(2);
  c1.demand << 1.0, a12;
  c2.lambda = rho2;
  c2.demand = Eigen::RowVectorXd(2);
  c2.demand << a21, 1.0;
  return {c1, c2};
}

// ---------------------------------------------------------------- criteria

CriterionResult static_drf_bias(const VerifyOptions&, const Overrides& o) {
  CriterionResult r;
  r.name = "static-drf-bias";
  const double tol = get(o, "tol", 1e-9);

  const DemandMatrix<double> coupled(mat2(1.0, 1.0 / 3.0, 0.5, 1.0));
  const auto alloc = drf_allocate(coupled);
  check_abs(r, "drf phi1 on [[1,1/3],[1/2,1]]", alloc.phi(0), 2.0 / 3.0, tol);
  check_abs(r, "drf phi2 on [[1,1/3],[1/2,1]]", alloc.phi(1), 2.0 / 3.0, tol);
  check_le(r, "resource 2 unsaturated", alloc.usage(1), 1.0 - 1e-6);

  // Without the resource-2 coupling the outcome flips to equal shares of
  // resource 1; the feasible allocation with that property is (1/2, 1).
  const DemandMatrix<double> uncoupled(mat2(1.0, 0.0, 0.5, 0.0));
  const auto alloc2 = drf_allocate(uncoupled);
  check_abs(r, "drf phi1 on [[1,0],[1/2,0]]", alloc2.phi(0), 0.5, tol);
  check_abs(r, "drf phi2 on [[1,0],[1/2,0]]", alloc2.phi(1), 1.0, tol);
  check_abs(r, "equal resource-1 shares", alloc2.phi(0) * 1.0 - alloc2.phi(1) * 0.5,
            0.0, tol);
  check_le(r, "resource-1 usage feasible", alloc2.usage(0), 1.0, tol);
  return r;
}

CriterionResult static_pf_examples(const VerifyOptions&, const Overrides& o) {
  CriterionResult r;
  r.name = "static-pf-examples";
  const double tol = get(o, "tol", 1e-9);
  const double residual_target = get(o, "kkt_tol", 1e-8);

  struct WorkedCase {
    const char* label;
    Eigen::MatrixXd a;
    double phi1, phi2, nu1, nu2;
  };
  // The third case's multipliers follow from the stationarity system at the
  // stated allocation; see the regression tests for the full derivation.
  const std::vector<WorkedCase> cases = {
      {"[[1/2,1],[1,1/2]]", mat2(0.5, 1, 1, 0.5), 2.0 / 3, 2.0 / 3, 1, 1},
      {"[[2/3,1],[1,1/2]]", mat2(2.0 / 3, 1, 1, 0.5), 0.75, 0.5, 2, 0},
      {"[[1/2,1],[1,1/3]]", mat2(0.5, 1, 1, 1.0 / 3), 0.8, 0.6, 1.5, 0.5},
      {"[[1,1],[1,1/2]]", mat2(1, 1, 1, 0.5), 0.5, 0.5, 2, 0},
  };
  SolverParams params;
  params.kkt_tol = 1e-11;
  for (const auto& c : cases) {
    const auto sol = pf_allocate(DemandMatrix<double>(c.a), params);
    check_le(r, std::string(c.label) + " kkt residual", sol.residual,
             residual_target);
    check_abs(r, std::string(c.label) + " phi1", sol.phi(0), c.phi1, tol);
    check_abs(r, std::string(c.label) + " phi2", sol.phi(1), c.phi2, tol);
    check_abs(r, std::string(c.label) + " nu1", sol.nu(0), c.nu1, tol);
    check_abs(r, std::string(c.label) + " nu2", sol.nu(1), c.nu2, tol);
  }
  return r;
}

// Random instance generator shared by the property suites: n <= 5, J <= 3,
// sparse-ish entries in (0,1], every row non-zero.
Eigen::MatrixXd random_instance(Rng& rng, Index max_jobs, Index max_resources) {
  const Index n = 1 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(max_jobs));
  const Index J = 1 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(max_resources));
  Eigen::MatrixXd a(n, J);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < J; ++j) {
      a(i, j) = rng.uniform01() < 0.75 ? rng.uniform01() : 0.0;
    }
    Index forced = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(J));
    if (a.row(i).maxCoeff() <= 0.0) a(i, forced) = 0.25 + 0.75 * rng.uniform01();
  }
  return a;
}

// Largest task volume job i can actually run when granted phi under claimed
// row a_claim while its true row is a_true.
double usable_volume(const Eigen::RowVectorXd& a_true,
                     const Eigen::RowVectorXd& a_claim, double phi) {
  double scale = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < a_true.size(); ++j) {
    if (a_true(j) > 0.0) scale = std::min(scale, a_claim(j) / a_true(j));
  }
  return phi * scale;
}

CriterionResult static_properties(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "static-properties";
  const long instances = static_cast<long>(get(o, "instances", 1000));
  const double tol = get(o, "tol", 1e-7);

  Rng rng(Rng::derive(opt.seed, 0x5eed, 1));
  SolverParams pf_params;

  long drf_sp_ok = 0, drf_si_ok = 0, pf_si_ok = 0, drf_scale_ok = 0,
       pf_scale_ok = 0, pf_mass_ok = 0, local_ok = 0, pf_station_ok = 0;
  for (long t = 0; t < instances; ++t) {
    const Eigen::MatrixXd a = random_instance(rng, 5, 3);
    const Index n = a.rows();
    const Index J = a.cols();
    const DemandMatrix<double> d(a);

    const auto drf = drf_allocate(d);
    const auto pf = pf_allocate(d, pf_params);

    // Sharing incentive for both policies.
    bool ok = true;
    for (Index i = 0; i < n; ++i) {
      ok = ok && dominant_share(d, drf.phi, i) >= 1.0 / static_cast<double>(n) - tol;
    }
    drf_si_ok += ok;
    ok = true;
    for (Index i = 0; i < n; ++i) {
      ok = ok && dominant_share(d, pf.phi, i) >= 1.0 / static_cast<double>(n) - tol;
    }
    pf_si_ok += ok;

    // Multiplier mass and stationarity.
    pf_mass_ok += std::abs(pf.nu.sum() - static_cast<double>(n)) <=
                  static_cast<double>(n) * 1e-8;
    ok = true;
    for (Index i = 0; i < n; ++i) {
      const double s = a.row(i) * pf.nu;
      ok = ok && std::abs(1.0 / pf.phi(i) - s) <= 1e-6 * std::max(1.0, s);
    }
    pf_station_ok += ok;

    // DRF strategy-proofness: a false claim never raises the task volume the
    // job can actually use (equivalently its true resource shares).
    {
      const Index i = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
      Eigen::MatrixXd b = a;
      for (Index j = 0; j < J; ++j) {
        b(i, j) = rng.uniform01() < 0.75 ? rng.uniform01() : 0.0;
      }
      if (b.row(i).maxCoeff() <= 0.0) b(i, 0) = 0.5;
      const DemandMatrix<double> db(b);
      const auto lied = drf_allocate(db);
      const double usable = usable_volume(a.row(i), b.row(i), lied.phi(i));
      drf_sp_ok += usable <= drf.phi(i) + tol;
    }

    // Scale invariance: scaling rows rescales volumes, shares stay put.
    {
      Eigen::MatrixXd b = a;
      Eigen::VectorXd scales(n);
      for (Index i = 0; i < n; ++i) {
        scales(i) = 0.1 + 0.9 * rng.uniform01();  // keep entries <= 1
        b.row(i) *= scales(i);
      }
      const DemandMatrix<double> db(b);
      const auto drf2 = drf_allocate(db);
      const auto pf2 = pf_allocate(db, pf_params);
      bool drf_ok = true, pf_ok = true;
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < J; ++j) {
          drf_ok = drf_ok &&
                   std::abs(drf2.phi(i) * b(i, j) - drf.phi(i) * a(i, j)) <= tol;
          pf_ok = pf_ok &&
                  std::abs(pf2.phi(i) * b(i, j) - pf.phi(i) * a(i, j)) <= tol;
        }
        drf_ok = drf_ok && std::abs(drf2.phi(i) * scales(i) - drf.phi(i)) <= tol;
      }
      drf_scale_ok += drf_ok;
      pf_scale_ok += pf_ok;
    }

    // Local fairness with one resource.
    if (J == 1) {
      local_ok += check_properties(d, drf.phi, 1e-8).local_fair &&
                  check_properties(d, pf.phi, 1e-6).local_fair;
    } else {
      ++local_ok;
    }
  }

  const double want = static_cast<double>(instances);
  check_abs(r, "drf strategy-proof instances", static_cast<double>(drf_sp_ok), want, 0);
  check_abs(r, "drf sharing-incentive instances", static_cast<double>(drf_si_ok), want, 0);
  check_abs(r, "pf sharing-incentive instances", static_cast<double>(pf_si_ok), want, 0);
  check_abs(r, "drf scale-invariance instances", static_cast<double>(drf_scale_ok), want, 0);
  check_abs(r, "pf scale-invariance instances", static_cast<double>(pf_scale_ok), want, 0);
  check_abs(r, "pf multiplier mass instances", static_cast<double>(pf_mass_ok), want, 0);
  check_abs(r, "pf stationarity instances", static_cast<double>(pf_station_ok), want, 0);
  check_abs(r, "local fairness instances", static_cast<double>(local_ok), want, 0);
  return r;
}

CriterionResult static_counterexamples(const VerifyOptions&, const Overrides& o) {
  CriterionResult r;
  r.name = "static-counterexamples";
  const double tol = get(o, "tol", 1e-9);
  SolverParams params;
  params.kkt_tol = 1e-11;

  // PF is not strategy-proof: claiming 2/3 on resource 1 lifts job 1's
  // resource-1 share from 1/3 to 1/2 at job 2's expense.
  const auto honest = pf_allocate(DemandMatrix<double>(mat2(0.5, 1, 1, 0.5)), params);
  const auto lied = pf_allocate(DemandMatrix<double>(mat2(2.0 / 3, 1, 1, 0.5)), params);
  check_abs(r, "truthful job-1 resource-1 share", honest.phi(0) * 0.5, 1.0 / 3.0, tol);
  check_abs(r, "false-claim job-1 resource-1 share", lied.phi(0) * (2.0 / 3.0), 0.5, tol);
  check_le(r, "job-2 resource-1 share drops", lied.phi(1), honest.phi(1) - 0.1);

  // Only PF is locally fair among the alpha-fair family: x = 3 instance.
  Eigen::MatrixXd single(2, 1);
  single << 0.5, 1.0 / 6.0;
  const DemandMatrix<double> d(single);
  for (double alpha : {0.5, 2.0, 4.0}) {
    const auto sol = alpha_fair_allocate(d, alpha, params);
    const double gap = std::abs(sol.phi(0) * 0.5 - sol.phi(1) / 6.0);
    check_ge(r, "alpha=" + std::to_string(alpha).substr(0, 3) + " share gap", gap,
             0.01);
  }
  const auto pf = alpha_fair_allocate(d, 1.0, params);
  check_abs(r, "alpha=1 share gap", std::abs(pf.phi(0) * 0.5 - pf.phi(1) / 6.0),
            0.0, 1e-8);
  return r;
}

CriterionResult fluid_processor_sharing(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "fluid-processor-sharing";
  const double events = get(o, "events", 200000);
  const int reps = static_cast<int>(get(o, "reps", 10));
  const double ci_mult = get(o, "ci_mult", 3.0);

  TrafficClass c;
  c.demand = Eigen::RowVectorXd(1);
  c.demand << 1.0;
  for (double rho : {0.3, 0.5, 0.8}) {
    c.lambda = rho;
    for (Policy policy : {Policy::drf(), Policy::pf()}) {
      const auto gammas = fluid_gammas({c}, policy, events, reps, opt.seed,
                                       "ps", opt.threads);
      const auto& est = gammas[0].est;
      const std::string what = policy_label(policy) + " gamma at rho=" +
                               std::to_string(rho).substr(0, 3);
      check_abs(r, what, est.mean, 1.0 - rho,
                ci_mult * std::max(est.ci_half, 1e-6));
    }
  }
  return r;
}

CriterionResult fluid_light_traffic(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "fluid-light-traffic";
  const double events = get(o, "events", 200000);
  const int reps = static_cast<int>(get(o, "reps", 10));
  const double tol = get(o, "abs", 0.02);

  const TwoClassProfile profile{0.1, 0.5, 0.05, 0.05};
  const auto classes = two_class_mix(0.1, 0.5, 0.05, 0.05);
  for (Policy policy : {Policy::drf(), Policy::pf()}) {
    const auto kind = policy.kind;
    const auto approx = light_traffic_gamma(profile, kind);
    const auto gammas =
        fluid_gammas(classes, policy, events, reps, opt.seed, "light", opt.threads);
    check_abs(r, policy_label(policy) + " gamma2 vs light-traffic form",
              gammas[1].est.mean, approx.second, tol);
  }
  return r;
}

CriterionResult fluid_heavy_traffic(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "fluid-heavy-traffic";
  const double events = get(o, "events", 1000000);
  const int reps = static_cast<int>(get(o, "reps", 10));
  const double rel = get(o, "rel", 0.15);

  // fig1b unbalance: rho1 = 3 rho2, resource-1 load 0.95.
  const double rho2 = 0.95 / 3.1;
  const double rho1 = 3.0 * rho2;
  const TwoClassProfile profile{0.1, 0.1, rho1, rho2};
  const auto classes = two_class_mix(0.1, 0.1, rho1, rho2);

  const auto pf_target = heavy_traffic_gamma(profile, PolicyKind::Pf);
  const auto drf_target = heavy_traffic_gamma(profile, PolicyKind::Drf);
  const auto pf = fluid_gammas(classes, Policy::pf(), events, reps, opt.seed,
                               "heavy", opt.threads);
  const auto drf = fluid_gammas(classes, Policy::drf(), events, reps, opt.seed,
                                "heavy", opt.threads);

  check_rel(r, "pf gamma2 vs (1-load)/alpha", pf[1].est.mean, pf_target.second, rel);
  check_rel(r, "drf gamma2 vs 1-load", drf[1].est.mean, drf_target.second, rel);
  const double gap = pf[1].est.mean - drf[1].est.mean;
  check_ge(r, "pf class-2 advantage", gap, pf[1].est.ci_half + drf[1].est.ci_half);
  return r;
}

CriterionResult fluid_strategyproof(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "fluid-strategyproof";
  const double events = get(o, "events", 200000);
  const int reps = static_cast<int>(get(o, "reps", 10));
  const double ci_mult = get(o, "ci_mult", 3.0);
  const double alpha = 0.1;

  const std::vector<std::pair<std::string, double>> betas = {
      {"truthful", alpha},
      {"opt-n1", optimal_false_claim(1, alpha)},
      {"opt-n2", optimal_false_claim(2, alpha)},
      {"opt-n5", optimal_false_claim(5, alpha)}};

  // Analytic: no false claim beats truth anywhere on the grid.
  bool dominated = true;
  double worst_gap = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double rho2 = 0.1 * i;
    const double truthful = gamma1_pf(alpha, alpha, rho2);
    for (size_t b = 1; b < betas.size(); ++b) {
      const double lied = gamma1_pf(alpha, betas[b].second, rho2);
      worst_gap = std::max(worst_gap, lied - truthful);
      dominated = dominated && lied <= truthful + 1e-12;
    }
  }
  check_true(r, "analytic truthful dominance on rho2 grid", dominated);
  check_le(r, "largest false-claim analytic gain", worst_gap, 0.0, 1e-12);

  // Simulation cross-validates the stationary oracle at every grid point.
  struct Cell {
    double analytic;
    Estimate est;
  };
  std::vector<Cell> cells(betas.size() * 9);
  parallel_for(cells.size(), opt.threads, [&](size_t idx) {
    const size_t b = idx / 9;
    const int i = static_cast<int>(idx % 9) + 1;
    const double rho2 = 0.1 * i;
    std::vector<double> samples(static_cast<size_t>(reps));
    for (int rep = 0; rep < reps; ++rep) {
      PermanentJobParams params;
      params.alpha = alpha;
      params.beta = betas[b].second;
      params.rho2 = rho2;
      params.horizon = events / (2.0 * rho2);
      params.seed = Rng::derive(opt.seed, 0xf1640000ULL + idx, static_cast<std::uint64_t>(rep));
      samples[static_cast<size_t>(rep)] = simulate_permanent_job(params).gamma1;
    }
    cells[idx] = {gamma1_pf(alpha, betas[b].second, rho2), summarize(samples)};
  });

  double worst_dev = 0.0;
  bool all_within = true;
  for (size_t idx = 0; idx < cells.size(); ++idx) {
    const double dev = std::abs(cells[idx].est.mean - cells[idx].analytic);
    const double budget = ci_mult * std::max(cells[idx].est.ci_half, 1e-6);
    worst_dev = std::max(worst_dev, dev / budget);
    all_within = all_within && dev <= budget;
  }
  check_true(r, "simulation matches oracle within CI budget (36 points)", all_within);
  check_le(r, "worst |sim-oracle| / (ci budget)", worst_dev, 1.0);
  return r;
}

CriterionResult task_zero_load(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "task-zero-load";
  const int reps = static_cast<int>(get(o, "reps", 4000));
  const double tol = get(o, "tol", 0.01);

  const double closed = zero_load_ratio(500, 100);
  const double exp_rate = lone_job_drain_rate(
      500, 100, TaskDistribution::exponential(0.2), reps, opt.seed);
  const double erlang_rate = lone_job_drain_rate(
      500, 100, TaskDistribution::erlang(20, 0.2), reps, opt.seed + 1);

  check_abs(r, "exponential lone-job rate vs 0.544", exp_rate, 0.544, tol);
  check_abs(r, "exponential lone-job rate vs closed form", exp_rate, closed, tol);
  check_ge(r, "erlang-20 rate above exponential", erlang_rate, exp_rate + 0.05);
  check_ge(r, "erlang-20 rate floor", erlang_rate, get(o, "erlang_floor", 0.9));
  return r;
}

CriterionResult task_fig6_gap(const VerifyOptions& opt, const Overrides& o) {
  CriterionResult r;
  r.name = "task-fig6-gap";
  const double jobs = get(o, "jobs", 2500);
  const int reps = static_cast<int>(get(o, "reps", 10));

  ScenarioConfig cfg = builtin_scenario("fig6exp");
  cfg.loads = {0.8};
  cfg.jobs = jobs;
  cfg.replications = reps;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  const auto rows = run_scenario(cfg);

  double pf_mean = 0, pf_ci = 0, drf_mean = 0, drf_ci = 0;
  for (const auto& row : rows) {
    if (row.class_id != 2) continue;
    if (row.policy == "pf") {
      pf_mean = row.gamma;
      pf_ci = row.ci;
    } else if (row.policy == "drf") {
      drf_mean = row.gamma;
      drf_ci = row.ci;
    }
  }
  check_ge(r, "pf class-2 gamma above drf at load 0.8", pf_mean - drf_mean, 0.0);
  check_ge(r, "CI separation (gap minus both half-widths)",
           pf_mean - drf_mean - pf_ci - drf_ci, 0.0);
  return r;
}

CriterionResult end_to_end(const VerifyOptions& opt, const Overrides& o,
                           const std::vector<CriterionResult>& prior) {
  CriterionResult r;
  r.name = "end-to-end";
  const auto t0 = std::chrono::steady_clock::now();

  std::filesystem::path dir =
      opt.output_dir.empty() ? std::filesystem::temp_directory_path() / "fairshare-e2e"
                             : std::filesystem::path(opt.output_dir);
  std::filesystem::create_directories(dir);

  bool all_ran = true;
  for (const auto& name : builtin_scenario_names()) {
    ScenarioConfig cfg = builtin_scenario(name);
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    if (o.count("events")) cfg.events = get(o, "events", cfg.events);
    if (o.count("jobs")) cfg.jobs = get(o, "jobs", cfg.jobs);
    const auto rows = run_scenario(cfg);
    write_csv_file((dir / (name + ".csv")).string(), rows, cfg);
    all_ran = all_ran && !rows.empty();
  }
  check_true(r, "all built-in scenarios ran and wrote CSV", all_ran);

  bool priors_pass = !prior.empty();
  for (const auto& p : prior) priors_pass = priors_pass && p.pass;
  check_true(r, "criteria 1-10 pass with this master seed", priors_pass);

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& p : prior) elapsed += p.seconds;
  check_le(r, "suite wall time (seconds)", elapsed, get(o, "budget", 1800.0));
  return r;
}

}  // namespace

std::vector<std::string> criteria_names() {
  return {"static-drf-bias",    "static-pf-examples",  "static-properties",
          "static-counterexamples", "fluid-processor-sharing",
          "fluid-light-traffic",   "fluid-heavy-traffic", "fluid-strategyproof",
          "task-zero-load",        "task-fig6-gap",       "end-to-end"};
}

CriterionResult run_criterion(const std::string& name, const VerifyOptions& options,
                              const Overrides& overrides,
                              const std::vector<CriterionResult>& prior) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult result;
  if (name == "static-drf-bias") {
    result = static_drf_bias(options, overrides);
  } else if (name == "static-pf-examples") {
    result = static_pf_examples(options, overrides);
  } else if (name == "static-properties") {
    result = static_properties(options, overrides);
  } else if (name == "static-counterexamples") {
    result = static_counterexamples(options, overrides);
  } else if (name == "fluid-processor-sharing") {
    result = fluid_processor_sharing(options, overrides);
  } else if (name == "fluid-light-traffic") {
    result = fluid_light_traffic(options, overrides);
  } else if (name == "fluid-heavy-traffic") {
    result = fluid_heavy_traffic(options, overrides);
  } else if (name == "fluid-strategyproof") {
    result = fluid_strategyproof(options, overrides);
  } else if (name == "task-zero-load") {
    result = task_zero_load(options, overrides);
  } else if (name == "task-fig6-gap") {
    result = task_fig6_gap(options, overrides);
  } else if (name == "end-to-end") {
    result = end_to_end(options, overrides, prior);
  } else {
    throw ConfigError("unknown criterion name: " + name);
  }
  result.pass = !result.checks.empty();
  for (const auto& c : result.checks) result.pass = result.pass && c.pass;
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<std::pair<std::string, Overrides>> parse_criteria_file(
    const std::string& text, const std::string& source) {
  std::vector<std::pair<std::string, Overrides>> out;
  const auto known = criteria_names();
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string name;
    if (!(ls >> name)) continue;
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError(source + ":" + std::to_string(line) +
                        ": unknown criterion name: " + name);
    }
    Overrides o;
    std::string kv;
    while (ls >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(source + ":" + std::to_string(line) +
                          ": expected key=value, got: " + kv);
      }
      try {
        o[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError(source + ":" + std::to_string(line) +
                          ": invalid override value: " + kv);
      }
    }
    out.emplace_back(name, std::move(o));
  }
  return out;
}

std::string format_check(const CheckLine& c) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "  %-4s %-55s measured=%-12.6g target=%-12.6g tol=%g (%s)",
                c.pass ? "ok" : "FAIL", c.what.c_str(), c.measured, c.target,
                c.tol, c.mode.c_str());
  return buf;
}

}  // namespace fairshare
