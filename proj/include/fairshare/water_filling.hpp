#pragma once

#include <vector>

#include "fairshare/demand.hpp"

namespace fairshare {

// Task volumes together with the per-resource usage they induce.
template <typename Scalar>
struct Allocation {
  VectorX<Scalar> phi;    // per-job task volume
  VectorX<Scalar> usage;  // u_j = sum_i phi_i a_ij
};

template <typename Scalar>
VectorX<Scalar> resource_usage(const DemandMatrix<Scalar>& d,
                               const VectorX<Scalar>& phi) {
  return d.coeffs().transpose() * phi;
}

// Progressive filling: every unfrozen job's volume grows at its fill rate
// (scaled by its multiplicity for aggregated classes); the next saturation
// time is computed analytically, all jobs needing a newly saturated resource
// freeze, and the process repeats until every job is frozen. Exact for exact
// scalar types.
template <typename Scalar>
Allocation<Scalar> waterfill(const DemandMatrix<Scalar>& d,
                             const VectorX<Scalar>& fill_rates,
                             const VectorX<Scalar>& multiplicities) {
  const auto& a = d.coeffs();
  const Index n = a.rows();
  const Index J = a.cols();
  if (fill_rates.size() != n || multiplicities.size() != n) {
    throw ValidationError("fill rate / multiplicity length mismatch");
  }
  for (Index i = 0; i < n; ++i) {
    if (!(fill_rates(i) > Scalar(0))) {
      throw ValidationError("fill rates must be strictly positive");
    }
    if (multiplicities(i) < Scalar(0)) {
      throw ValidationError("multiplicities must be non-negative");
    }
  }

  VectorX<Scalar> phi = VectorX<Scalar>::Zero(n);
  VectorX<Scalar> usage = VectorX<Scalar>::Zero(J);
  std::vector<bool> active(static_cast<size_t>(n), true);
  std::vector<bool> saturated(static_cast<size_t>(J), false);
  const Scalar tie = ScalarTraits<Scalar>::tie_tolerance();

  Index remaining = n;
  while (remaining > 0) {
    // Aggregate fill rate on each unsaturated resource.
    VectorX<Scalar> g = VectorX<Scalar>::Zero(J);
    for (Index i = 0; i < n; ++i) {
      if (!active[static_cast<size_t>(i)]) continue;
      for (Index j = 0; j < J; ++j) {
        if (a(i, j) > Scalar(0)) g(j) += multiplicities(i) * fill_rates(i) * a(i, j);
      }
    }

    // Zero-multiplicity stragglers consume nothing; saturate nothing either,
    // so release them directly at an arbitrary finite volume.
    bool found = false;
    Scalar t_min{};
    for (Index j = 0; j < J; ++j) {
      if (saturated[static_cast<size_t>(j)] || !(g(j) > Scalar(0))) continue;
      Scalar t = (Scalar(1) - usage(j)) / g(j);
      if (!found || t < t_min) {
        t_min = t;
        found = true;
      }
    }
    if (!found) {
      // Only possible when every active job has zero multiplicity (its class
      // is empty); give each the volume a lone job of its row would get.
      for (Index i = 0; i < n; ++i) {
        if (active[static_cast<size_t>(i)]) {
          phi(i) = Scalar(1) / d.dominant_requirement(i);
          active[static_cast<size_t>(i)] = false;
          --remaining;
        }
      }
      break;
    }

    for (Index i = 0; i < n; ++i) {
      if (active[static_cast<size_t>(i)]) phi(i) += fill_rates(i) * t_min;
    }
    for (Index j = 0; j < J; ++j) {
      if (!saturated[static_cast<size_t>(j)]) usage(j) += g(j) * t_min;
    }

    // Resources that just filled up; freeze every active job needing one.
    for (Index j = 0; j < J; ++j) {
      if (saturated[static_cast<size_t>(j)] || !(g(j) > Scalar(0))) continue;
      if (Scalar(1) - usage(j) <= tie) {
        saturated[static_cast<size_t>(j)] = true;
        for (Index i = 0; i < n; ++i) {
          if (active[static_cast<size_t>(i)] && a(i, j) > Scalar(0)) {
            active[static_cast<size_t>(i)] = false;
            --remaining;
          }
        }
      }
    }
  }

  Allocation<Scalar> out;
  out.phi = std::move(phi);
  out.usage = a.transpose() * (multiplicities.cwiseProduct(out.phi));
  return out;
}

template <typename Scalar>
Allocation<Scalar> waterfill(const DemandMatrix<Scalar>& d,
                             const VectorX<Scalar>& fill_rates) {
  const VectorX<Scalar> ones = VectorX<Scalar>::Ones(d.jobs());
  return waterfill(d, fill_rates, ones);
}

// Max-min fairness: all volumes rise together.
template <typename Scalar>
Allocation<Scalar> maxmin_allocate(const DemandMatrix<Scalar>& d) {
  const VectorX<Scalar> ones = VectorX<Scalar>::Ones(d.jobs());
  return waterfill(d, ones);
}

// Dominant resource fairness: weighted water-filling with w_i = 1/max_j a_ij.
template <typename Scalar>
Allocation<Scalar> drf_allocate(const DemandMatrix<Scalar>& d) {
  return waterfill(d, d.drf_weights());
}

// Per-class DRF under a dynamic population: class k holds `counts(k)`
// identical jobs, all rising at the class weight.
template <typename Scalar>
Allocation<Scalar> drf_allocate_counts(const DemandMatrix<Scalar>& d,
                                       const VectorX<Scalar>& counts) {
  return waterfill(d, d.drf_weights(), counts);
}

}  // namespace fairshare
