#pragma once

#include <string>
#include <utility>

#include "fairshare/types.hpp"

namespace fairshare {

// Normalized per-task requirements: row per job, column per resource.
// Entries are fractions of each resource's capacity consumed by one unit of
// task volume. Valid matrices have non-negative entries, at least one
// strictly positive entry per row (each job needs some resource) and no
// entry above 1 (a single task fits into the cluster).
template <typename Scalar>
class DemandMatrix {
 public:
  DemandMatrix() = default;

  explicit DemandMatrix(MatrixX<Scalar> coeffs) : a_(std::move(coeffs)) {
    for (Index i = 0; i < a_.rows(); ++i) {
      bool has_positive = false;
      for (Index j = 0; j < a_.cols(); ++j) {
        if (a_(i, j) < Scalar(0)) {
          throw ValidationError("demand entry (" + std::to_string(i) + "," +
                                std::to_string(j) + ") is negative");
        }
        if (a_(i, j) > Scalar(1)) {
          throw ValidationError("demand entry (" + std::to_string(i) + "," +
                                std::to_string(j) +
                                ") exceeds 1 after normalization");
        }
        if (a_(i, j) > Scalar(0)) has_positive = true;
      }
      if (a_.cols() > 0 && !has_positive) {
        throw ValidationError("demand row " + std::to_string(i) +
                              " is all zero; each job needs at least one resource");
      }
    }
  }

  Index jobs() const { return a_.rows(); }
  Index resources() const { return a_.cols(); }
  const MatrixX<Scalar>& coeffs() const { return a_; }

  bool needs(Index job, Index resource) const {
    return a_(job, resource) > Scalar(0);
  }

  // Largest normalized requirement of one job (its dominant resource).
  Scalar dominant_requirement(Index job) const {
    return a_.row(job).maxCoeff();
  }

  VectorX<Scalar> dominant_requirements() const {
    return a_.rowwise().maxCoeff();
  }

  // DRF weights w_i = 1 / max_j a_ij.
  VectorX<Scalar> drf_weights() const {
    VectorX<Scalar> w(a_.rows());
    for (Index i = 0; i < a_.rows(); ++i) w(i) = Scalar(1) / dominant_requirement(i);
    return w;
  }

 private:
  MatrixX<Scalar> a_;
};

// Divides raw per-task amounts by resource capacities.
template <typename Scalar>
DemandMatrix<Scalar> normalize_demands(const MatrixX<Scalar>& raw,
                                       const VectorX<Scalar>& capacities) {
  if (capacities.size() != raw.cols()) {
    throw ValidationError("capacity vector length does not match resource count");
  }
  for (Index j = 0; j < capacities.size(); ++j) {
    if (!(capacities(j) > Scalar(0))) {
      throw ValidationError("capacity " + std::to_string(j) +
                            " must be strictly positive");
    }
  }
  MatrixX<Scalar> a = raw;
  for (Index j = 0; j < a.cols(); ++j) a.col(j) /= capacities(j);
  return DemandMatrix<Scalar>(std::move(a));
}

}  // namespace fairshare
