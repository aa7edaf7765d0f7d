#pragma once

#include <string>

#include "fairshare/demand.hpp"
#include "fairshare/water_filling.hpp"

namespace fairshare {

// Fraction of its dominant resource that job i receives.
inline double dominant_share(const DemandMatrix<double>& d,
                             const Eigen::VectorXd& phi, Index i) {
  if (i < 0 || i >= d.jobs()) {
    throw std::out_of_range("job index " + std::to_string(i) + " out of range");
  }
  return phi(i) * d.dominant_requirement(i);
}

struct PropertyReport {
  bool pareto_efficient = false;  // each job needs a saturated resource
  bool sharing_incentive = false; // dominant share >= 1/n for every job
  bool local_fair = false;        // single resource: all shares equal 1/n
};

inline PropertyReport check_properties(const DemandMatrix<double>& d,
                                       const Eigen::VectorXd& phi,
                                       double tol = kDefaultTol) {
  const Index n = d.jobs();
  const Index J = d.resources();
  PropertyReport report;
  if (n == 0) {
    report.pareto_efficient = report.sharing_incentive = report.local_fair = true;
    return report;
  }

  const Eigen::VectorXd usage = resource_usage(d, phi);

  report.pareto_efficient = true;
  for (Index i = 0; i < n && report.pareto_efficient; ++i) {
    bool saturated_needed = false;
    for (Index j = 0; j < J; ++j) {
      if (d.needs(i, j) && usage(j) >= 1.0 - tol) {
        saturated_needed = true;
        break;
      }
    }
    report.pareto_efficient = saturated_needed;
  }

  report.sharing_incentive = true;
  for (Index i = 0; i < n; ++i) {
    if (dominant_share(d, phi, i) < 1.0 / static_cast<double>(n) - tol) {
      report.sharing_incentive = false;
      break;
    }
  }

  report.local_fair = true;
  if (J == 1) {
    for (Index i = 0; i < n; ++i) {
      if (std::abs(phi(i) * d.coeffs()(i, 0) - 1.0 / static_cast<double>(n)) > tol) {
        report.local_fair = false;
        break;
      }
    }
  }
  return report;
}

}  // namespace fairshare
