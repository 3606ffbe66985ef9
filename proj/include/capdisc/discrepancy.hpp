// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Core>
#include <span>

#include "capdisc/cap_measure.hpp"
#include "capdisc/point_set.hpp"

namespace capdisc {

/// A spherical cap: the closed halfspace {x : <w,x> >= t} intersected with
/// the sphere. w must be unit within kNormTolerance, t in [-1,1].
struct Cap {
  static constexpr double kNormTolerance = 1e-8;

  Eigen::VectorXd w;
  double t = 0.0;
};

/// Throws std::invalid_argument if the cap is malformed for dimension n.
void validate_cap(const Cap& cap, int dim);

/// Fraction of sample points inside the cap's closed halfspace.
///
/// The comparison <w,x^i> >= t - boundary_tol is exact floating point with
/// the default boundary_tol = 0; a positive tolerance is for caps supplied
/// from noisy external sources.
double empirical_measure(const PointSet& ps, const Cap& cap,
                         double boundary_tol = 0.0);

/// |empirical measure - cap measure| for one cap.
double local_discrepancy(const PointSet& ps, const Cap& cap);
double local_discrepancy(const PointSet& ps, const CapMeasureEvaluator& eval,
                         const Cap& cap);

/// Whether a directional supremum is attained at its threshold or is the
/// limit as t approaches the threshold from above (the empirical measure
/// drops there, so the value may not be attained).
enum class SupSide { kAtThreshold, kLimitFromAbove };

struct DirectionalSupremum {
  double value = 0.0;    // sup over t in [-1,1] of the local discrepancy
  double argmax_t = 1.0; // witness threshold
  SupSide attained_side = SupSide::kAtThreshold;
};

/// Exact supremum over t in [-1,1] of |emp(w,t) - cap(w,t)| for fixed w.
///
/// The empirical measure is piecewise constant with jumps exactly at the
/// distinct dot products d_1 > ... > d_m of w with the sample; the cap
/// measure is continuous and non-increasing, so the supremum over each
/// constancy interval sits at an endpoint. Both endpoint families
/// (attained at d_k, and limit from above at d_k) are enumerated.
DirectionalSupremum directional_supremum(const PointSet& ps,
                                         const Eigen::VectorXd& w);
DirectionalSupremum directional_supremum(const PointSet& ps,
                                         const CapMeasureEvaluator& eval,
                                         const Eigen::VectorXd& w);

/// Same computation on a caller-provided buffer of dot products <w,x^i>.
/// Sorts the buffer in place; no allocation beyond the caller's.
DirectionalSupremum supremum_from_dots(std::span<double> dots,
                                       const CapMeasureEvaluator& eval);

/// Lower estimate of the discrepancy: max over sample points x^i of the
/// directional supremum in direction x^i. Always <= the exact discrepancy.
double lower_bound(const PointSet& ps);

/// Per-direction detail used by the lower-bound report.
struct LowerBoundDetail {
  double value = 0.0;
  std::vector<DirectionalSupremum> per_point;
};
LowerBoundDetail lower_bound_detail(const PointSet& ps);

}  // namespace capdisc
