#pragma once

// Exact-rational scalar for the water-filling kernels. Inputs with rational
// requirements produce exact allocations (saturation times are solved
// analytically, so no rounding enters at any stage).

#include <boost/rational.hpp>

#include <cstdint>
#include <limits>

#include <Eigen/Core>

namespace fairshare {

using Rational = boost::rational<std::int64_t>;

}  // namespace fairshare

namespace Eigen {

template <typename I>
struct NumTraits<boost::rational<I>> {
  using Self = boost::rational<I>;
  using Real = Self;
  using NonInteger = Self;
  using Literal = Self;
  using Nested = Self;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8
  };

  static Self epsilon() { return Self(0); }
  static Self dummy_precision() { return Self(0); }
  static Self highest() { return Self(std::numeric_limits<I>::max()); }
  static Self lowest() { return Self(std::numeric_limits<I>::min()); }
  static int digits10() { return 0; }
};

}  // namespace Eigen
