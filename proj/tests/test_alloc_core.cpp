#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairshare/kkt.hpp"
#include "fairshare/properties.hpp"
#include "fairshare/rational.hpp"
#include "fairshare/rng.hpp"
#include "fairshare/water_filling.hpp"

using namespace fairshare;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Index n = static_cast<Index>(rows.size());
  const Index J = static_cast<Index>(rows.begin()->size());
  Eigen::MatrixXd m(n, J);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// Test-side oracle: progressive filling by small time steps, independent of
// the event-wise implementation. Accurate to roughly `dt * n`.
Eigen::VectorXd small_step_waterfill(const Eigen::MatrixXd& a,
                                     const Eigen::VectorXd& rates,
                                     double dt = 1e-6) {
  const Index n = a.rows();
  const Index J = a.cols();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  std::vector<bool> frozen(static_cast<size_t>(n), false);
  for (long step = 0; step < 10000000; ++step) {
    Eigen::VectorXd usage = a.transpose() * phi;
    // freeze jobs that need a resource no longer able to absorb a full step
    bool any_active = false;
    for (Index i = 0; i < n; ++i) {
      if (frozen[static_cast<size_t>(i)]) continue;
      for (Index j = 0; j < J; ++j) {
        if (a(i, j) > 0.0 && usage(j) >= 1.0 - 2.0 * dt * n) {
          frozen[static_cast<size_t>(i)] = true;
          break;
        }
      }
      any_active = any_active || !frozen[static_cast<size_t>(i)];
    }
    if (!any_active) break;
    for (Index i = 0; i < n; ++i) {
      if (!frozen[static_cast<size_t>(i)]) phi(i) += rates(i) * dt;
    }
  }
  return phi;
}

MatrixX<Rational> rmat(std::initializer_list<std::initializer_list<Rational>> rows) {
  const Index n = static_cast<Index>(rows.size());
  const Index J = static_cast<Index>(rows.begin()->size());
  MatrixX<Rational> m(n, J);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const Rational& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("normalize_demands divides by capacities") {
  Eigen::MatrixXd raw(1, 2);
  raw << 2, 1;
  Eigen::VectorXd caps(2);
  caps << 2, 10;
  const auto d = normalize_demands<double>(raw, caps);
  CHECK(d.coeffs()(0, 0) == doctest::Approx(1.0));
  CHECK(d.coeffs()(0, 1) == doctest::Approx(0.1));

  Eigen::MatrixXd ident(2, 2);
  ident << 1, 1, 1, 1;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  const auto d2 = normalize_demands<double>(ident, ones);
  CHECK(d2.coeffs() == ident);
}

TEST_CASE("normalize_demands rejects bad input") {
  Eigen::MatrixXd zero_row(1, 2);
  zero_row << 0, 0;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(normalize_demands<double>(zero_row, ones), ValidationError);

  Eigen::MatrixXd ok(1, 2);
  ok << 1, 1;
  Eigen::VectorXd bad_caps(2);
  bad_caps << 1, 0;
  CHECK_THROWS_AS(normalize_demands<double>(ok, bad_caps), ValidationError);
  bad_caps << 1, -2;
  CHECK_THROWS_AS(normalize_demands<double>(ok, bad_caps), ValidationError);
}

TEST_CASE("demand matrix invariants") {
  CHECK_THROWS_AS(DemandMatrix<double>(mat({{-0.1, 1}})), ValidationError);
  CHECK_THROWS_AS(DemandMatrix<double>(mat({{1.5, 1}})), ValidationError);
  CHECK_THROWS_AS(DemandMatrix<double>(mat({{0, 0}, {1, 1}})), ValidationError);
  // zero columns are inert resources, not errors
  CHECK_NOTHROW(DemandMatrix<double>(mat({{1, 0}, {0.5, 0}})));
}

TEST_CASE("maxmin: single resource shares are proportional to demands") {
  const DemandMatrix<double> d(mat({{0.5}, {0.25}}));
  const auto alloc = maxmin_allocate(d);
  CHECK(alloc.phi(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(alloc.phi(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(alloc.phi(0) * 0.5 == doctest::Approx(2.0 / 3.0));
  CHECK(alloc.phi(1) * 0.25 == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(check_properties(d, alloc.phi).local_fair);
  CHECK_FALSE(check_properties(d, alloc.phi).sharing_incentive);
}

TEST_CASE("maxmin: single job saturates its dominant resource") {
  const DemandMatrix<double> d(mat({{0.5, 1.0}}));
  const auto alloc = maxmin_allocate(d);
  CHECK(alloc.phi(0) == doctest::Approx(1.0));
}

TEST_CASE("maxmin matches the small-step oracle") {
  // frozen from the exact event-wise computation; the small-step oracle
  // reproduces it to its own resolution
  const Eigen::MatrixXd a = mat({{1.0, 1.0 / 3.0}, {0.5, 1.0}});
  const DemandMatrix<double> d(a);
  const auto alloc = maxmin_allocate(d);
  CHECK(alloc.phi(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(alloc.phi(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const auto oracle = small_step_waterfill(a, Eigen::VectorXd::Ones(2));
  CHECK(std::abs(alloc.phi(0) - oracle(0)) < 1e-4);
  CHECK(std::abs(alloc.phi(1) - oracle(1)) < 1e-4);
}

TEST_CASE("multi-stage water-filling, exact rationals") {
  // hand-derived: resource 1 saturates at t=1/2 freezing jobs 1-2, job 3
  // then fills resource 2 alone up to 7/4
  const MatrixX<Rational> a = rmat({{Rational(1), Rational(0)},
                                    {Rational(1), Rational(1, 4)},
                                    {Rational(0), Rational(1, 2)}});
  const DemandMatrix<Rational> d(a);
  const auto alloc = maxmin_allocate(d);
  CHECK(alloc.phi(0) == Rational(1, 2));
  CHECK(alloc.phi(1) == Rational(1, 2));
  CHECK(alloc.phi(2) == Rational(7, 4));
  CHECK(alloc.usage(0) == Rational(1));
  CHECK(alloc.usage(1) == Rational(1));

  const auto oracle = small_step_waterfill(
      mat({{1, 0}, {1, 0.25}, {0, 0.5}}), Eigen::VectorXd::Ones(3));
  CHECK(std::abs(boost::rational_cast<double>(alloc.phi(2)) - oracle(2)) < 1e-4);
}

TEST_CASE("drf: exact values on the biased two-job instance") {
  const MatrixX<Rational> a =
      rmat({{Rational(1), Rational(1, 3)}, {Rational(1, 2), Rational(1)}});
  const auto alloc = drf_allocate(DemandMatrix<Rational>(a));
  CHECK(alloc.phi(0) == Rational(2, 3));
  CHECK(alloc.phi(1) == Rational(2, 3));
  CHECK(alloc.usage(0) == Rational(1));
  CHECK(alloc.usage(1) == Rational(8, 9));  // resource 2 stays unsaturated

  // dropping the unsaturated resource flips the outcome to equal shares of
  // resource 1: phi = (1/2, 1), shares (1/2, 1/2)
  const MatrixX<Rational> b =
      rmat({{Rational(1), Rational(0)}, {Rational(1, 2), Rational(0)}});
  const auto alloc2 = drf_allocate(DemandMatrix<Rational>(b));
  CHECK(alloc2.phi(0) == Rational(1, 2));
  CHECK(alloc2.phi(1) == Rational(1));
  CHECK(alloc2.phi(0) * Rational(1) == alloc2.phi(1) * Rational(1, 2));
  CHECK(alloc2.usage(0) == Rational(1));
}

TEST_CASE("drf: single resource gives equal shares") {
  const DemandMatrix<double> d(mat({{0.5}, {0.25}}));
  const auto alloc = drf_allocate(d);
  CHECK(alloc.phi(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alloc.phi(1) == doctest::Approx(2.0).epsilon(1e-12));
  const auto report = check_properties(d, alloc.phi);
  CHECK(report.local_fair);
  CHECK(report.sharing_incentive);
  CHECK(report.pareto_efficient);
}

TEST_CASE("degenerate populations") {
  const DemandMatrix<double> empty(Eigen::MatrixXd(0, 2));
  CHECK(maxmin_allocate(empty).phi.size() == 0);
  CHECK(drf_allocate(empty).phi.size() == 0);

  const DemandMatrix<double> lone(mat({{0.25, 0.5}}));
  CHECK(maxmin_allocate(lone).phi(0) == doctest::Approx(2.0));
  CHECK(drf_allocate(lone).phi(0) == doctest::Approx(2.0));
  const auto pf = pf_allocate(lone);
  CHECK(pf.phi(0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("water-filling characterization holds on random instances") {
  Rng rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_u64() % 5);
    const Index J = 1 + static_cast<Index>(rng.next_u64() % 3);
    Eigen::MatrixXd a(n, J);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < J; ++j) {
        a(i, j) = rng.uniform01() < 0.7 ? rng.uniform01() : 0.0;
      }
      if (a.row(i).maxCoeff() <= 0.0) a(i, 0) = 0.5;
    }
    const DemandMatrix<double> d(a);
    const auto weights = d.drf_weights();
    const auto alloc = drf_allocate(d);
    const Eigen::VectorXd usage = resource_usage(d, alloc.phi);
    CHECK(usage.maxCoeff() <= 1.0 + 1e-9);
    for (Index i = 0; i < n; ++i) {
      bool witness = false;
      for (Index j = 0; j < J && !witness; ++j) {
        if (!(a(i, j) > 0.0) || usage(j) < 1.0 - 1e-9) continue;
        bool is_max = true;
        for (Index k = 0; k < n; ++k) {
          if (a(k, j) > 0.0 &&
              alloc.phi(k) / weights(k) > alloc.phi(i) / weights(i) + 1e-9) {
            is_max = false;
            break;
          }
        }
        witness = is_max;
      }
      CHECK(witness);
    }
  }
}

TEST_CASE("pf: worked two-job examples") {
  SolverParams tight;
  tight.kkt_tol = 1e-11;

  auto sol = pf_allocate(DemandMatrix<double>(mat({{0.5, 1}, {1, 0.5}})), tight);
  CHECK(sol.phi(0) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  CHECK(sol.phi(1) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  CHECK(sol.nu(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.nu(1) == doctest::Approx(1.0).epsilon(1e-8));

  sol = pf_allocate(DemandMatrix<double>(mat({{2.0 / 3, 1}, {1, 0.5}})), tight);
  CHECK(sol.phi(0) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(sol.phi(1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.nu(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sol.nu(1) == doctest::Approx(0.0).scale(1).epsilon(1e-8));

  // Stationarity pins the multipliers at (3/2, 1/2) here: with both
  // resources tight, 5/4 = nu1/2 + nu2 and 5/3 = nu1 + nu2/3.
  sol = pf_allocate(DemandMatrix<double>(mat({{0.5, 1}, {1, 1.0 / 3}})), tight);
  CHECK(sol.phi(0) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(sol.phi(1) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sol.nu(0) == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(sol.nu(1) == doctest::Approx(0.5).epsilon(1e-8));

  sol = pf_allocate(DemandMatrix<double>(mat({{1, 1}, {1, 0.5}})), tight);
  CHECK(sol.phi(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.phi(1) == doctest::Approx(0.5).epsilon(1e-9));

  sol = pf_allocate(DemandMatrix<double>(mat({{1, 0.1}, {0.1, 1}})), tight);
  CHECK(sol.phi(0) == doctest::Approx(10.0 / 11).epsilon(1e-9));
  CHECK(sol.phi(1) == doctest::Approx(10.0 / 11).epsilon(1e-9));
  CHECK(sol.nu(0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("pf: kkt system satisfied on random instances") {
  Rng rng(77001);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_u64() % 5);
    const Index J = 1 + static_cast<Index>(rng.next_u64() % 3);
    Eigen::MatrixXd a(n, J);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < J; ++j) {
        a(i, j) = rng.uniform01() < 0.75 ? rng.uniform01() : 0.0;
      }
      if (a.row(i).maxCoeff() <= 0.0) a(i, J - 1) = 0.5;
    }
    const DemandMatrix<double> d(a);
    const auto sol = pf_allocate(d);
    const double total = static_cast<double>(n);
    CHECK(std::abs(sol.nu.sum() - total) <= total * 1e-8);
    for (Index i = 0; i < n; ++i) {
      const double s = a.row(i) * sol.nu;
      CHECK(std::abs(1.0 / sol.phi(i) - s) <= 1e-6 * std::max(1.0, s));
    }
    const Eigen::VectorXd usage = resource_usage(d, sol.phi);
    CHECK(usage.maxCoeff() <= 1.0 + 1e-7);
    CHECK(check_properties(d, sol.phi, 1e-6).sharing_incentive);
  }
}

TEST_CASE("pf: unsaturated resources can be dropped without effect") {
  Rng rng(88111);
  int exercised = 0;
  for (int trial = 0; trial < 200 && exercised < 60; ++trial) {
    Eigen::MatrixXd a(2, 2);
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 2; ++j) a(i, j) = 0.05 + 0.95 * rng.uniform01();
    }
    const auto sol = pf_allocate(DemandMatrix<double>(a));
    const Eigen::VectorXd usage = resource_usage(DemandMatrix<double>(a), sol.phi);
    for (Index j = 0; j < 2; ++j) {
      if (usage(j) < 1.0 - 1e-4 && sol.nu(j) < 1e-6) {
        Eigen::MatrixXd reduced = a.col(1 - j);
        const auto again = pf_allocate(DemandMatrix<double>(reduced));
        CHECK(std::abs(again.phi(0) - sol.phi(0)) < 1e-6);
        CHECK(std::abs(again.phi(1) - sol.phi(1)) < 1e-6);
        ++exercised;
      }
    }
  }
  CHECK(exercised > 0);
}

TEST_CASE("pf: reports non-convergence instead of returning junk") {
  SolverParams starved;
  starved.max_iters = 3;
  starved.kkt_tol = 1e-12;
  CHECK_THROWS_AS(
      pf_allocate(DemandMatrix<double>(mat({{2.0 / 3, 1}, {1, 0.5}})), starved),
      SolverError);
}

TEST_CASE("alpha-fair: analytic single-resource solution at alpha=2") {
  // phi2 = sqrt(2) phi1 with phi1/2 + phi2/4 = 1
  const DemandMatrix<double> d(mat({{0.5}, {0.25}}));
  SolverParams tight;
  tight.kkt_tol = 1e-11;
  const auto sol = alpha_fair_allocate(d, 2.0, tight);
  const double phi1 = 4.0 - 2.0 * std::sqrt(2.0);
  CHECK(sol.phi(0) == doctest::Approx(phi1).epsilon(1e-8));
  CHECK(sol.phi(1) == doctest::Approx(std::sqrt(2.0) * phi1).epsilon(1e-8));
}

TEST_CASE("alpha-fair: large alpha approaches max-min shares") {
  const DemandMatrix<double> d(mat({{0.5}, {0.25}}));
  const auto sol = alpha_fair_allocate(d, 64.0);
  CHECK(sol.phi(0) * 0.5 == doctest::Approx(2.0 / 3).epsilon(0.02));
  CHECK(sol.phi(1) * 0.25 == doctest::Approx(1.0 / 3).epsilon(0.02));
}

TEST_CASE("alpha-fair: alpha=1 delegates to pf") {
  const DemandMatrix<double> d(mat({{0.5, 1}, {1, 0.5}}));
  const auto sol = alpha_fair_allocate(d, 1.0);
  CHECK(sol.phi(0) == doctest::Approx(2.0 / 3).epsilon(1e-7));
  CHECK(sol.phi(1) == doctest::Approx(2.0 / 3).epsilon(1e-7));
}

TEST_CASE("alpha-fair: rejects non-positive alpha") {
  const DemandMatrix<double> d(mat({{0.5}}));
  CHECK_THROWS_AS(alpha_fair_allocate(d, 0.0), ValidationError);
  CHECK_THROWS_AS(alpha_fair_allocate(d, -1.0), ValidationError);
}

TEST_CASE("dominant_share") {
  const DemandMatrix<double> lone(mat({{0.5, 1.0}}));
  Eigen::VectorXd phi(1);
  phi << 1.0;
  CHECK(dominant_share(lone, phi, 0) == doctest::Approx(1.0));

  const DemandMatrix<double> biased(mat({{1.0, 1.0 / 3}, {0.5, 1.0}}));
  Eigen::VectorXd phi2(2);
  phi2 << 2.0 / 3, 2.0 / 3;
  CHECK(dominant_share(biased, phi2, 0) == doctest::Approx(2.0 / 3));

  Eigen::VectorXd zero(1);
  zero << 0.0;
  const DemandMatrix<double> tiny(mat({{0.1, 1.0}}));
  CHECK(dominant_share(tiny, zero, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(dominant_share(tiny, zero, 3), std::out_of_range);
}

TEST_CASE("drf strategy-proofness is about usable volume, not claimed shares") {
  // A padded claim can raise the *reserved* share of a non-dominant
  // resource while shrinking what the job can actually run.
  const Eigen::MatrixXd truth = mat({{1, 0.1}, {0.1, 1}});
  const Eigen::MatrixXd padded = mat({{1, 0.5}, {0.1, 1}});
  const auto honest = drf_allocate(DemandMatrix<double>(truth));
  const auto lied = drf_allocate(DemandMatrix<double>(padded));

  const double claimed_r2_honest = honest.phi(0) * 0.1;
  const double claimed_r2_lied = lied.phi(0) * 0.5;
  CHECK(claimed_r2_lied > claimed_r2_honest + 0.1);  // reserved share grew

  const double usable = lied.phi(0) * std::min(1.0 / 1.0, 0.5 / 0.1);
  CHECK(usable <= honest.phi(0) + 1e-9);  // usable volume did not
}

TEST_CASE("drf strategy-proofness across random false claims") {
  Rng rng(404202);
  for (int trial = 0; trial < 400; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.next_u64() % 4);
    const Index J = 1 + static_cast<Index>(rng.next_u64() % 3);
    Eigen::MatrixXd a(n, J);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < J; ++j) {
        a(i, j) = rng.uniform01() < 0.7 ? rng.uniform01() : 0.0;
      }
      if (a.row(i).maxCoeff() <= 0.0) a(i, 0) = 0.5;
    }
    const auto honest = drf_allocate(DemandMatrix<double>(a));
    const Index liar = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
    Eigen::MatrixXd b = a;
    for (Index j = 0; j < J; ++j) {
      b(liar, j) = rng.uniform01() < 0.7 ? rng.uniform01() : 0.0;
    }
    if (b.row(liar).maxCoeff() <= 0.0) b(liar, 0) = 0.5;
    const auto lied = drf_allocate(DemandMatrix<double>(b));
    double scale = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < J; ++j) {
      if (a(liar, j) > 0.0) scale = std::min(scale, b(liar, j) / a(liar, j));
    }
    CHECK(lied.phi(liar) * scale <= honest.phi(liar) + 1e-7);
  }
}

TEST_CASE("scale invariance for drf and pf") {
  Rng rng(515151);
  for (int trial = 0; trial < 120; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_u64() % 4);
    const Index J = 1 + static_cast<Index>(rng.next_u64() % 3);
    Eigen::MatrixXd a(n, J);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < J; ++j) {
        a(i, j) = rng.uniform01() < 0.8 ? rng.uniform01() : 0.0;
      }
      if (a.row(i).maxCoeff() <= 0.0) a(i, 0) = 0.5;
    }
    Eigen::MatrixXd b = a;
    Eigen::VectorXd scales(n);
    for (Index i = 0; i < n; ++i) {
      scales(i) = 0.1 + 0.9 * rng.uniform01();
      b.row(i) *= scales(i);
    }
    const auto drf1 = drf_allocate(DemandMatrix<double>(a));
    const auto drf2 = drf_allocate(DemandMatrix<double>(b));
    const auto pf1 = pf_allocate(DemandMatrix<double>(a));
    const auto pf2 = pf_allocate(DemandMatrix<double>(b));
    for (Index i = 0; i < n; ++i) {
      CHECK(drf2.phi(i) == doctest::Approx(drf1.phi(i) / scales(i)).epsilon(1e-9));
      for (Index j = 0; j < J; ++j) {
        CHECK(std::abs(drf2.phi(i) * b(i, j) - drf1.phi(i) * a(i, j)) < 1e-9);
        CHECK(std::abs(pf2.phi(i) * b(i, j) - pf1.phi(i) * a(i, j)) < 1e-6);
      }
    }
  }
}

TEST_CASE("pf manipulation case: the claim that backfires") {
  // the same padded claim against a different rival shrinks both volumes
  SolverParams tight;
  tight.kkt_tol = 1e-11;
  const auto before = pf_allocate(DemandMatrix<double>(mat({{0.5, 1}, {1, 1.0 / 3}})), tight);
  const auto after = pf_allocate(DemandMatrix<double>(mat({{2.0 / 3, 1}, {1, 1.0 / 3}})), tight);
  CHECK(after.phi(0) == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(after.phi(1) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(after.phi(0) < before.phi(0));  // fewer usable tasks than the honest 4/5
  CHECK(after.phi(1) < before.phi(1));
}
