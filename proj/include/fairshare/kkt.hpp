#pragma once

#include <algorithm>
#include <cmath>

#include "fairshare/demand.hpp"

namespace fairshare {

struct SolverParams {
  double step = 0.0;  // 0 picks the default 0.05/n (scaled by alpha when != 1)
  long max_iters = 200000;
  double kkt_tol = 1e-8;
};

using MultiplierVector = Eigen::VectorXd;

struct KktSolution {
  Eigen::VectorXd phi;
  MultiplierVector nu;
  double residual = 0.0;
  long iterations = 0;
};

namespace detail {

// KKT residual: primal feasibility (u <= 1), complementarity in min form
// (driving nu_j to zero on unsaturated resources), and for PF the multiplier
// mass identity sum(nu) = n.
inline double kkt_residual(const Eigen::VectorXd& nu, const Eigen::VectorXd& u,
                           double total_jobs, bool pf) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    const double over = u(j) - 1.0;
    r = std::max(r, over);
    r = std::max(r, std::min(nu(j), std::abs(over)));
  }
  if (pf) r = std::max(r, std::abs(nu.sum() - total_jobs) / total_jobs);
  return r;
}

}  // namespace detail

// Proportional fairness for an aggregated population: class i holds
// counts(i) identical jobs. Projected gradient on the multipliers,
//   nu_j <- (nu_j + step (u_j - 1))+ ,  phi_i = 1 / (a_i . nu).
// Returns phi and nu satisfying the KKT system within params.kkt_tol.
// `warm` seeds the multipliers (previous-event solution in simulations).
inline KktSolution pf_allocate_counts(const DemandMatrix<double>& d,
                                      const Eigen::VectorXd& counts,
                                      SolverParams params = {},
                                      const MultiplierVector* warm = nullptr) {
  const auto& a = d.coeffs();
  const Index n = a.rows();
  const Index J = a.cols();
  if (counts.size() != n) throw ValidationError("counts length mismatch");

  KktSolution sol;
  const double total = counts.sum();
  if (n == 0 || total <= 0.0) {
    sol.phi = Eigen::VectorXd::Zero(n);
    sol.nu = Eigen::VectorXd::Zero(J);
    return sol;
  }

  const double base_step = params.step > 0.0 ? params.step : 0.05 / total;
  // Near the optimum the dual curvature is bounded by the per-resource
  // usage (at most ~J), so a population-independent step is stable there
  // and avoids the n^2 iteration growth of the conservative base step.
  const double fast_step = std::max(base_step, std::min(0.25, 1.0 / static_cast<double>(J)));
  Eigen::VectorXd nu = warm != nullptr && warm->size() == J
                           ? warm->cwiseMax(0.0).eval()
                           : Eigen::VectorXd::Constant(J, total / J);
  if (nu.sum() <= 0.0) nu.setConstant(total / J);

  Eigen::VectorXd s(n), psi(n), u(J);
  double residual = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();
  bool accelerate = params.step <= 0.0;
  for (long it = 1; it <= params.max_iters; ++it) {
    s.noalias() = a * nu;
    for (Index i = 0; i < n; ++i) psi(i) = 1.0 / std::max(s(i), 1e-300);
    psi = psi.cwiseMin(1e12);
    u.noalias() = a.transpose() * counts.cwiseProduct(psi);
    residual = detail::kkt_residual(nu, u, total, /*pf=*/true);
    if (residual <= params.kkt_tol) {
      sol.phi = psi;
      sol.nu = nu;
      sol.residual = residual;
      sol.iterations = it;
      return sol;
    }
    best_residual = std::min(best_residual, residual);
    if (residual > 100.0 * best_residual + 1.0) accelerate = false;
    const bool near = it > 300 && (u.array() - 1.0).maxCoeff() < 0.5;
    const double step = accelerate && near ? fast_step : base_step;
    nu = (nu + step * (u.array() - 1.0).matrix()).cwiseMax(0.0);
  }
  throw SolverError("pf solver did not converge", residual, params.max_iters);
}

inline KktSolution pf_allocate(const DemandMatrix<double>& d,
                               SolverParams params = {},
                               const MultiplierVector* warm = nullptr) {
  return pf_allocate_counts(d, Eigen::VectorXd::Ones(d.jobs()), params, warm);
}

// Alpha-fair allocation, U(phi) = phi^(1-alpha)/(1-alpha), via multiplicative
// multiplier updates (robust across the ill-conditioned large-alpha regime
// where the optimal multipliers are vanishingly small). alpha = 1 delegates
// to the PF solver.
inline KktSolution alpha_fair_allocate_counts(const DemandMatrix<double>& d,
                                              double alpha,
                                              const Eigen::VectorXd& counts,
                                              SolverParams params = {}) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (std::abs(alpha - 1.0) < 1e-12) return pf_allocate_counts(d, counts, params);

  const auto& a = d.coeffs();
  const Index n = a.rows();
  const Index J = a.cols();
  if (counts.size() != n) throw ValidationError("counts length mismatch");

  KktSolution sol;
  const double total = counts.sum();
  if (n == 0 || total <= 0.0) {
    sol.phi = Eigen::VectorXd::Zero(n);
    sol.nu = Eigen::VectorXd::Zero(J);
    return sol;
  }

  const double step = params.step > 0.0 ? params.step : 0.2 * std::min(alpha, 4.0);
  Eigen::VectorXd nu = Eigen::VectorXd::Constant(J, total / J);
  Eigen::VectorXd s(n), psi(n), u(J);
  double residual = 0.0;
  for (long it = 1; it <= params.max_iters; ++it) {
    s.noalias() = a * nu;
    for (Index i = 0; i < n; ++i) {
      psi(i) = std::min(std::pow(std::max(s(i), 1e-300), -1.0 / alpha), 1e12);
    }
    u.noalias() = a.transpose() * counts.cwiseProduct(psi);
    residual = detail::kkt_residual(nu, u, total, /*pf=*/false);
    if (residual <= params.kkt_tol) {
      sol.phi = psi;
      sol.nu = nu;
      sol.residual = residual;
      sol.iterations = it;
      return sol;
    }
    for (Index j = 0; j < J; ++j) {
      nu(j) = std::max(nu(j) * std::exp(std::clamp(step * (u(j) - 1.0), -30.0, 30.0)),
                       1e-300);
    }
  }
  throw SolverError("alpha-fair solver did not converge", residual,
                    params.max_iters);
}

inline KktSolution alpha_fair_allocate(const DemandMatrix<double>& d, double alpha,
                                       SolverParams params = {}) {
  return alpha_fair_allocate_counts(d, alpha, Eigen::VectorXd::Ones(d.jobs()),
                                    params);
}

// Event-loop solver reusing the previous event's multipliers. Population
// changes of one job leave the dual solution nearby, so a constant step
// (stable near the optimum, where the dual curvature is bounded by the
// resource usage) converges in a handful of iterations; a cold restart at
// the conservative 0.05/n step is the fallback.
class WarmKktSolver {
 public:
  WarmKktSolver(DemandMatrix<double> demands, double alpha = 1.0,
                double tol = 1e-7, long max_iters = 200000)
      : d_(std::move(demands)), alpha_(alpha), tol_(tol), max_iters_(max_iters) {}

  const DemandMatrix<double>& demands() const { return d_; }
  const MultiplierVector& multipliers() const { return nu_; }

  // Per-class task volumes for the given population (zero counts allowed).
  const Eigen::VectorXd& solve(const Eigen::VectorXd& counts) {
    const double total = counts.sum();
    if (total <= 0.0) {
      phi_.setZero(d_.jobs());
      warm_ = false;
      return phi_;
    }
    const bool pf = std::abs(alpha_ - 1.0) < 1e-12;
    const double warm_step = pf ? 0.25 : 0.2 * std::min(alpha_, 4.0);
    const double cold_step = pf ? 0.05 / total : 0.2 * std::min(alpha_, 4.0);
    if (warm_) {
      if (run(counts, total, warm_step, /*from_warm=*/true)) return phi_;
      warm_ = false;
    }
    if (!run(counts, total, cold_step, /*from_warm=*/false)) {
      throw SolverError("warm kkt solver did not converge", last_residual_,
                        max_iters_);
    }
    return phi_;
  }

 private:
  bool run(const Eigen::VectorXd& counts, double total, double step,
           bool from_warm) {
    const auto& a = d_.coeffs();
    const Index n = a.rows();
    const Index J = a.cols();
    const bool pf = std::abs(alpha_ - 1.0) < 1e-12;
    if (!from_warm || nu_.size() != J) {
      nu_ = Eigen::VectorXd::Constant(J, total / J);
    } else if (last_total_ > 0.0) {
      nu_ *= total / last_total_;  // multiplier mass tracks the population
    }
    s_.resize(n);
    phi_.resize(n);
    u_.resize(J);
    for (long it = 1; it <= max_iters_; ++it) {
      s_.noalias() = a * nu_;
      if (pf) {
        for (Index i = 0; i < n; ++i) {
          phi_(i) = std::min(1.0 / std::max(s_(i), 1e-300), 1e12);
        }
      } else {
        for (Index i = 0; i < n; ++i) {
          phi_(i) =
              std::min(std::pow(std::max(s_(i), 1e-300), -1.0 / alpha_), 1e12);
        }
      }
      u_.noalias() = a.transpose() * counts.cwiseProduct(phi_);
      last_residual_ = detail::kkt_residual(nu_, u_, total, pf);
      if (last_residual_ <= tol_) {
        last_total_ = total;
        warm_ = true;
        return true;
      }
      if (pf) {
        nu_ = (nu_ + step * (u_.array() - 1.0).matrix()).cwiseMax(0.0);
      } else {
        for (Index j = 0; j < J; ++j) {
          nu_(j) = std::max(
              nu_(j) * std::exp(std::clamp(step * (u_(j) - 1.0), -30.0, 30.0)),
              1e-300);
        }
      }
    }
    return false;
  }

  DemandMatrix<double> d_;
  double alpha_;
  double tol_;
  long max_iters_;
  MultiplierVector nu_;
  Eigen::VectorXd s_, phi_, u_;
  double last_total_ = 0.0;
  double last_residual_ = 0.0;
  bool warm_ = false;
};

}  // namespace fairshare
