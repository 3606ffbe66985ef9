// SPDX-License-Identifier: MIT
#pragma once

namespace capdisc {

/// Integral of sin^m over [0, theta], for integer m >= 0 and theta in [0, pi].
///
/// Evaluated by the stable two-term reduction
///   S_m(theta) = (-cos(theta) sin^{m-1}(theta) + (m-1) S_{m-2}(theta)) / m
/// bottoming out at S_0 = theta and S_1 = 1 - cos(theta), so the result is
/// exact up to rounding; no quadrature is involved.
///
/// Throws std::domain_error for theta outside [0, pi] or m < 0.
double sin_power_integral(int m, double theta);

/// 1 / S_{n-2}(pi): normalizes the cap measure so the full sphere has mass 1.
/// Throws std::domain_error for n < 2.
double normalization_constant(int n);

/// Uniform surface probability of the spherical cap {x in S^{n-1} : <w,x> >= t}.
///
/// The measure depends only on the threshold t. Immutable after construction;
/// safe to share across threads.
class CapMeasureEvaluator {
 public:
  /// Snap width around |t| = 1: thresholds computed from floating-point dot
  /// products can land a hair above 1; anything within this distance of +-1
  /// is treated as exactly +-1. Inputs farther outside [-1,1] are rejected.
  static constexpr double kEndpointSnap = 1e-14;

  explicit CapMeasureEvaluator(int dimension, double quad_tolerance = 1e-12);

  int dimension() const noexcept { return dim_; }
  double normalization() const noexcept { return norm_; }
  double quad_tolerance() const noexcept { return quad_tol_; }

  /// Cap measure at threshold t in [-1,1].
  ///
  /// Exact special cases: t=1 -> 0, t=-1 -> 1, t=0 -> 1/2. Negative t is
  /// evaluated through the reflection 1 - measure(-t), which makes
  /// measure(t) + measure(-t) == 1 hold to the last bit.
  /// Throws std::domain_error when |t| > 1 beyond the snap width.
  double operator()(double t) const;

 private:
  double positive_branch(double t) const;  // t in (0, 1)

  int dim_;
  double norm_;
  double quad_tol_;
};

/// One-shot convenience wrapper around CapMeasureEvaluator.
double cap_measure(int n, double t);

}  // namespace capdisc
