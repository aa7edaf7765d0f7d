#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairshare/analytic.hpp"
#include "fairshare/kkt.hpp"

using namespace fairshare;

namespace {

TrafficClass make_class(double lambda, double a1, double a2) {
  TrafficClass c;
  c.lambda = lambda;
  c.demand = Eigen::RowVectorXd(2);
  c.demand << a1, a2;
  return c;
}

}  // namespace

TEST_CASE("capacity region: balanced two-class mix") {
  // stable iff lambda (1 + 1/10)/2 < 1, i.e. lambda < 20/11
  const double boundary = 20.0 / 11.0;
  for (double lambda : {0.5, 1.0, boundary - 1e-6}) {
    const auto loads = capacity_region_check(
        {make_class(lambda / 2, 1.0, 0.1), make_class(lambda / 2, 0.1, 1.0)});
    CHECK(loads.stable);
  }
  const auto at = capacity_region_check(
      {make_class(boundary / 2 + 1e-9, 1.0, 0.1),
       make_class(boundary / 2 + 1e-9, 0.1, 1.0)});
  CHECK_FALSE(at.stable);
}

TEST_CASE("capacity region: zero load and unbalanced ratio") {
  const auto zero = capacity_region_check({make_class(0, 1.0, 0.1)});
  CHECK(zero.stable);
  CHECK(zero.load.maxCoeff() == doctest::Approx(0.0));

  // lambda1 = 3 lambda / 4: CPU load lambda(3 + 1/10)/4 is about 2.385x the
  // RAM load lambda(3/10 + 1)/4
  const double lambda = 1.0;
  const auto loads = capacity_region_check(
      {make_class(0.75 * lambda, 1.0, 0.1), make_class(0.25 * lambda, 0.1, 1.0)});
  CHECK(loads.load(0) == doctest::Approx(lambda * 3.1 / 4));
  CHECK(loads.load(1) == doctest::Approx(lambda * 1.3 / 4));
  CHECK(loads.load(0) / loads.load(1) == doctest::Approx(31.0 / 13.0));
}

TEST_CASE("light traffic: plug-in values") {
  const TwoClassProfile zero{0.1, 0.5, 0.0, 0.0};
  CHECK(light_traffic_gamma(zero, PolicyKind::Drf).first == doctest::Approx(1.0));
  CHECK(light_traffic_gamma(zero, PolicyKind::Pf).second == doctest::Approx(1.0));

  const TwoClassProfile p{0.1, 0.5, 0.05, 0.05};
  CHECK(light_traffic_gamma(p, PolicyKind::Drf).second == doctest::Approx(0.925));
  CHECK(light_traffic_gamma(p, PolicyKind::Pf).second == doctest::Approx(0.945));
  // class 1 sees the same first-order behaviour under both policies
  CHECK(light_traffic_gamma(p, PolicyKind::Drf).first ==
        doctest::Approx(light_traffic_gamma(p, PolicyKind::Pf).first));
}

TEST_CASE("light traffic: pf coefficient never exceeds drf's") {
  for (double beta = 0.05; beta <= 1.0; beta += 0.05) {
    for (double alpha = 0.05; alpha <= beta; alpha += 0.05) {
      CHECK(std::max(2.0 - 1.0 / beta, alpha) <= beta + 1e-12);
    }
  }
}

TEST_CASE("light traffic: validates the profile") {
  CHECK_THROWS_AS(
      light_traffic_gamma(TwoClassProfile{0.5, 0.1, 0.0, 0.0}, PolicyKind::Pf),
      ValidationError);
}

TEST_CASE("heavy traffic: plug-in values and identities") {
  const double rho2 = 0.95 / 3.1;
  const TwoClassProfile p{0.1, 0.1, 3 * rho2, rho2};
  const auto pf = heavy_traffic_gamma(p, PolicyKind::Pf);
  const auto drf = heavy_traffic_gamma(p, PolicyKind::Drf);
  CHECK(pf.first == doctest::Approx(0.05));
  CHECK(pf.second == doctest::Approx(0.5));
  CHECK(drf.first == doctest::Approx(0.05));
  CHECK(drf.second == doctest::Approx(0.05));

  // gamma2 / gamma1 = 1/alpha for pf, independent of the load
  for (double load1 : {0.8, 0.9, 0.99}) {
    const double r2 = load1 / 3.1;
    const TwoClassProfile q{0.1, 0.1, 3 * r2, r2};
    const auto g = heavy_traffic_gamma(q, PolicyKind::Pf);
    CHECK(g.second / g.first == doctest::Approx(10.0));
  }

  // rates vanish as the load reaches capacity
  const double r2 = (1.0 - 1e-9) / 3.1;
  const auto edge = heavy_traffic_gamma(TwoClassProfile{0.1, 0.1, 3 * r2, r2},
                                        PolicyKind::Pf);
  CHECK(edge.first == doctest::Approx(0.0).scale(1).epsilon(1e-6));

  // requires resource 1 strictly more loaded
  CHECK_THROWS_AS(
      heavy_traffic_gamma(TwoClassProfile{0.1, 0.1, 0.1, 0.9}, PolicyKind::Pf),
      ValidationError);
}

TEST_CASE("permanent job: closed form matches the pf solver") {
  const double alpha = 0.1;
  SolverParams tight;
  tight.kkt_tol = 1e-11;
  for (double beta : {alpha, optimal_false_claim(1, alpha), 0.9}) {
    for (long n : {1L, 2L, 3L, 5L, 12L, 30L}) {
      Eigen::MatrixXd a(2, 2);
      a << 1.0, beta, alpha, 1.0;
      Eigen::VectorXd counts(2);
      counts << 1.0, static_cast<double>(n);
      const auto sol = pf_allocate_counts(DemandMatrix<double>(a), counts, tight);
      CHECK(sol.phi(0) ==
            doctest::Approx(permanent_job_rate(n, alpha, beta)).epsilon(1e-8));
    }
  }
  // truthful n=1 value: 10/11
  CHECK(permanent_job_rate(1, 0.1, 0.1) == doctest::Approx(10.0 / 11).epsilon(1e-12));
  CHECK(permanent_job_rate(0, 0.1, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("permanent job: rate is non-increasing in the competitor count") {
  for (double beta : {0.1, 0.3, 0.9}) {
    double prev = permanent_job_rate(0, 0.1, beta);
    for (long n = 1; n <= 60; ++n) {
      const double cur = permanent_job_rate(n, 0.1, beta);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("permanent job: optimal claim") {
  // interior claim iff fewer competitors than 1/alpha
  const double alpha = 0.1;
  for (long n = 1; n <= 14; ++n) {
    const double beta = optimal_false_claim(n, alpha);
    CHECK(beta < 1.0);
    if (n < 10) {
      CHECK(beta > alpha);
    } else if (n > 10) {
      CHECK(beta <= alpha + 1e-12);
    }
  }
  // the claim maximizes the closed-form rate over a fine grid
  for (long n : {1L, 2L, 5L}) {
    const double best = optimal_false_claim(n, alpha);
    const double best_rate = permanent_job_rate(n, alpha, best);
    for (double beta = alpha; beta <= 1.0; beta += 0.001) {
      CHECK(permanent_job_rate(n, alpha, beta) <= best_rate + 1e-9);
    }
  }
}

TEST_CASE("birth-death distribution: mass, balance, truncation") {
  const double alpha = 0.1, beta = 0.1, rho2 = 0.6;
  const auto bd = permanent_job_distribution(alpha, beta, rho2);
  CHECK(bd.pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bd.tail_bound < 1e-9);
  for (long n = 0; n + 1 < bd.pi.size(); ++n) {
    const double death = 1.0 - beta * permanent_job_rate(n + 1, alpha, beta);
    const double residual = bd.pi(n) * rho2 - bd.pi(n + 1) * death;
    CHECK(std::abs(residual) < 1e-12);
  }
  CHECK_THROWS_AS(permanent_job_distribution(alpha, beta, 1.0), ValidationError);
}

TEST_CASE("gamma1: empty-system limit and truthful dominance") {
  CHECK(gamma1_pf(0.1, 0.5, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gamma1_pf(0.1, 0.1, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));

  const double alpha = 0.1;
  for (int i = 1; i <= 9; ++i) {
    const double rho2 = 0.1 * i;
    const double truthful = gamma1_pf(alpha, alpha, rho2);
    for (long n : {1L, 2L, 5L}) {
      const double lied = gamma1_pf(alpha, optimal_false_claim(n, alpha), rho2);
      CHECK(lied <= truthful + 1e-12);
    }
  }
}

TEST_CASE("zero-load ratio") {
  const double r = zero_load_ratio(500, 100);
  CHECK(r == doctest::Approx(0.544).epsilon(0.002));  // about 0.54

  // independent evaluation with reverse-order harmonic accumulation
  long double harmonic = 0.0L;
  for (long k = 99; k >= 1; --k) harmonic += 1.0L / static_cast<long double>(k);
  const long double direct = 5.0L / (401.0L / 100.0L + harmonic);
  CHECK(r == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));

  CHECK(zero_load_ratio(7, 1) == doctest::Approx(1.0));
  CHECK(zero_load_ratio(5000, 100) == doctest::Approx(0.9227).epsilon(0.001));
  CHECK(zero_load_ratio(5000, 100) > 0.9);
  CHECK_THROWS_AS(zero_load_ratio(50, 100), ValidationError);
}
