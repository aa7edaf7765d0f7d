#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairshare/analytic.hpp"
#include "fairshare/stats.hpp"
#include "fairshare/task_sim.hpp"

using namespace fairshare;

namespace {

DemandMatrix<double> two_class_norm() {
  Eigen::MatrixXd a(2, 2);
  a << 0.01, 0.001, 0.001, 0.01;  // (1, 0.1) and (0.1, 1) over capacity 100
  return DemandMatrix<double>(a);
}

std::vector<TaskClass> fig6_classes(double lambda_total) {
  TaskClass c1, c2;
  c1.lambda = 0.75 * lambda_total;
  c1.tasks_per_job = 500;
  c1.demand_abs = Eigen::RowVectorXd(2);
  c1.demand_abs << 1.0, 0.1;
  c2.lambda = 0.25 * lambda_total;
  c2.tasks_per_job = 500;
  c2.demand_abs = Eigen::RowVectorXd(2);
  c2.demand_abs << 0.1, 1.0;
  return {c1, c2};
}

ClusterCapacity cap100() {
  ClusterCapacity c;
  c.units = Eigen::Vector2d(100.0, 100.0);
  return c;
}

}  // namespace

TEST_CASE("most deprived: zero allocation wins under both policies") {
  const auto d = two_class_norm();
  std::vector<DeprivationEntry> jobs = {{0, 0, 0}, {5, 1, 1}};
  MultiplierVector nu = Eigen::Vector2d(1.0, 1.0);
  CHECK(most_deprived(jobs, d, PolicyKind::Drf, nu) == 0);
  CHECK(most_deprived(jobs, d, PolicyKind::Pf, nu) == 0);
}

TEST_CASE("most deprived: index arithmetic") {
  Eigen::MatrixXd rel(2, 2);
  rel << 1.0, 0.1, 0.1, 1.0;
  const DemandMatrix<double> d(rel);
  std::vector<DeprivationEntry> jobs = {{3, 0, 0}, {2, 1, 1}};
  MultiplierVector nu = Eigen::Vector2d(1.0, 1.0);
  // drf indices (3, 2); pf indices (3*1.1, 2*1.1)
  CHECK(most_deprived(jobs, d, PolicyKind::Drf, nu) == 1);
  CHECK(most_deprived(jobs, d, PolicyKind::Pf, nu) == 1);
}

TEST_CASE("most deprived: deterministic tie-break by arrival order") {
  const auto d = two_class_norm();
  std::vector<DeprivationEntry> jobs = {{2, 0, 7}, {2, 0, 3}};
  MultiplierVector nu = Eigen::Vector2d(1.0, 1.0);
  CHECK(most_deprived(jobs, d, PolicyKind::Drf, nu) == 1);
  CHECK_THROWS_AS(most_deprived({}, d, PolicyKind::Drf, nu), ValidationError);
}

TEST_CASE("lone job drains through the full staircase") {
  const auto profile =
      lone_job_drain_profile(500, 100, TaskDistribution::exponential(0.2), 17);
  REQUIRE(profile.size() == 500);
  for (size_t c = 0; c < 400; ++c) CHECK(profile[c] == 100);
  for (size_t c = 400; c < 500; ++c) {
    CHECK(profile[c] == 500 - 1 - static_cast<long>(c));
  }
}

TEST_CASE("lone-job drain rate near the closed form, erlang tighter") {
  const double exp_rate =
      lone_job_drain_rate(500, 100, TaskDistribution::exponential(0.2), 600, 4);
  CHECK(exp_rate == doctest::Approx(zero_load_ratio(500, 100)).epsilon(0.02));
  const double erl_rate =
      lone_job_drain_rate(500, 100, TaskDistribution::erlang(20, 0.2), 300, 5);
  CHECK(erl_rate > exp_rate + 0.1);
  CHECK(zero_load_ratio(500, 100) == doctest::Approx(0.5442).epsilon(1e-3));
}

TEST_CASE("single-slot cluster matches the fluid drain exactly in expectation") {
  const double rate =
      lone_job_drain_rate(40, 1, TaskDistribution::exponential(0.5), 4000, 6);
  CHECK(rate == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("task simulation respects capacity and stays deterministic") {
  const auto classes = fig6_classes(0.6 / 0.775);
  TaskSimParams params;
  params.horizon = 150.0;
  params.seed = 23;
  for (Policy policy : {Policy::drf(), Policy::pf()}) {
    const auto a = simulate_tasks(classes, cap100(), policy,
                                  TaskDistribution::exponential(0.2), params);
    const auto b = simulate_tasks(classes, cap100(), policy,
                                  TaskDistribution::exponential(0.2), params);
    CHECK(a.peak_usage <= 1.0);
    CHECK(a.gamma[0] == b.gamma[0]);
    CHECK(a.gamma[1] == b.gamma[1]);
    CHECK(a.events == b.events);
    CHECK(a.gamma[0] > 0.0);
    CHECK(a.gamma[0] <= 1.05);
  }
}

TEST_CASE("task simulation approaches fluid rates when sigma >> capacity") {
  // one class, single resource; fluid predicts gamma = 1 - rho
  TaskClass c;
  c.lambda = 0.5 / 500.0;  // rho = lambda sigma tau / C = 0.5
  c.tasks_per_job = 5000;
  c.demand_abs = Eigen::RowVectorXd(1);
  c.demand_abs << 1.0;
  ClusterCapacity cap;
  cap.units = Eigen::VectorXd::Constant(1, 10.0);
  // rho = lambda * sigma * tau * (1/C) = 0.001 * 5000 * 1 * 0.1 = 0.5
  c.lambda = 0.001;
  TaskSimParams params;
  params.horizon = 1200000.0;
  std::vector<double> xs;
  for (int r = 0; r < 6; ++r) {
    params.seed = 31 + static_cast<std::uint64_t>(r);
    xs.push_back(simulate_tasks({c}, cap, Policy::drf(),
                                TaskDistribution::exponential(1.0), params)
                     .gamma[0]);
  }
  // long deterministic jobs mix slowly, so the estimator is noisy; assert
  // the 5% fluid agreement up to the replication CI
  const auto est = summarize(xs);
  CHECK(std::abs(est.mean - 0.5) < 0.025 + 3.0 * est.ci_half);
}

TEST_CASE("config validation") {
  TaskClass c;
  c.lambda = 0.1;
  c.tasks_per_job = 10;
  c.demand_abs = Eigen::RowVectorXd(1);
  c.demand_abs << 200.0;  // exceeds capacity
  ClusterCapacity cap;
  cap.units = Eigen::VectorXd::Constant(1, 100.0);
  TaskSimParams params;
  params.horizon = 10.0;
  CHECK_THROWS_AS(simulate_tasks({c}, cap, Policy::drf(),
                                 TaskDistribution::exponential(1.0), params),
                  ValidationError);
  c.demand_abs << 10.0;
  CHECK_THROWS_AS(simulate_tasks({c}, cap, Policy::alpha_fair(2.0),
                                 TaskDistribution::exponential(1.0), params),
                  ValidationError);
}
