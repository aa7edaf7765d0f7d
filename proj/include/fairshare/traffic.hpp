#pragma once

#include <string>
#include <vector>

#include "fairshare/demand.hpp"

namespace fairshare {

// One class of the dynamic traffic mix. Jobs arrive at rate lambda, need
// sigma tasks on average, each task lasting tau on average, and every task
// consumes `demand` (normalized fractions) of the resources.
struct TrafficClass {
  double lambda = 0.0;
  double sigma = 1.0;
  double tau = 1.0;
  Eigen::RowVectorXd demand;

  double mu() const { return 1.0 / (sigma * tau); }           // completion rate at unit volume
  double rho() const { return lambda * sigma * tau; }          // offered load
  double dominant() const { return demand.maxCoeff(); }

  void validate() const {
    if (lambda < 0) throw ValidationError("arrival rate must be non-negative");
    if (!(sigma > 0)) throw ValidationError("mean tasks per job must be positive");
    if (!(tau > 0)) throw ValidationError("mean task time must be positive");
    DemandMatrix<double>(demand);  // row invariants
  }
};

inline DemandMatrix<double> demand_matrix(const std::vector<TrafficClass>& classes) {
  if (classes.empty()) return DemandMatrix<double>(Eigen::MatrixXd(0, 0));
  const Index J = classes.front().demand.size();
  Eigen::MatrixXd a(static_cast<Index>(classes.size()), J);
  for (size_t k = 0; k < classes.size(); ++k) {
    if (classes[k].demand.size() != J) {
      throw ValidationError("class " + std::to_string(k) +
                            " demand length differs from class 0");
    }
    a.row(static_cast<Index>(k)) = classes[k].demand;
  }
  return DemandMatrix<double>(std::move(a));
}

}  // namespace fairshare
