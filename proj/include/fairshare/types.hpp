#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fairshare {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;

// Single tolerance threaded through property checkers and float comparisons.
inline constexpr double kDefaultTol = 1e-9;

// Thrown when inputs violate a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative solver fails to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, long iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  long iterations() const { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

// Saturation tie tolerance for water-filling; exact types override to zero.
template <typename Scalar>
struct ScalarTraits {
  static Scalar tie_tolerance() { return Scalar(0); }
};

template <>
struct ScalarTraits<double> {
  static double tie_tolerance() { return 1e-12; }
};

template <>
struct ScalarTraits<float> {
  static float tie_tolerance() { return 1e-6f; }
};

}  // namespace fairshare
