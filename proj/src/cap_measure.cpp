// SPDX-License-Identifier: MIT
#include "capdisc/cap_measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace capdisc {

namespace {

// Core reduction on precomputed c = cos(theta), s = sin(theta).
// theta itself is only needed for even m (the S_0 base case), which lets
// callers that know t = cos(theta) skip the arccos for odd m.
double sin_power_from_cos_sin(int m, double theta, double c, double s) {
  double acc;
  int k;
  if (m % 2 == 0) {
    acc = theta;  // S_0
    k = 2;
  } else {
    acc = 1.0 - c;  // S_1
    k = 3;
  }
  const double s2 = s * s;
  double s_pow = (m % 2 == 0) ? s : s2;  // sin^{k-1}(theta)
  for (; k <= m; k += 2) {
    acc = (-c * s_pow + (k - 1) * acc) / k;
    s_pow *= s2;
  }
  return acc;
}

}  // namespace

double sin_power_integral(int m, double theta) {
  if (m < 0) {
    throw std::domain_error("sin_power_integral: exponent must be non-negative");
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw std::domain_error("sin_power_integral: theta outside [0, pi]: " +
                            std::to_string(theta));
  }
  return sin_power_from_cos_sin(m, theta, std::cos(theta), std::sin(theta));
}

double normalization_constant(int n) {
  if (n < 2) {
    throw std::domain_error("normalization_constant: dimension must be >= 2");
  }
  return 1.0 / sin_power_integral(n - 2, std::numbers::pi);
}

CapMeasureEvaluator::CapMeasureEvaluator(int dimension, double quad_tolerance)
    : dim_(dimension),
      norm_(normalization_constant(dimension)),
      quad_tol_(quad_tolerance) {}

double CapMeasureEvaluator::positive_branch(double t) const {
  const int m = dim_ - 2;
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  const double theta = (m % 2 == 0) ? std::acos(t) : 0.0;
  return norm_ * sin_power_from_cos_sin(m, theta, t, s);
}

double CapMeasureEvaluator::operator()(double t) const {
  if (t > 1.0 || t < -1.0) {
    if (t > 1.0 && t <= 1.0 + kEndpointSnap) {
      t = 1.0;
    } else if (t < -1.0 && t >= -1.0 - kEndpointSnap) {
      t = -1.0;
    } else {
      throw std::domain_error("cap_measure: threshold outside [-1, 1]: " +
                              std::to_string(t));
    }
  }
  if (t >= 1.0 - kEndpointSnap) return 0.0;
  if (t <= -1.0 + kEndpointSnap) return 1.0;
  if (t == 0.0) return 0.5;
  if (t > 0.0) return positive_branch(t);
  return 1.0 - positive_branch(-t);
}

double cap_measure(int n, double t) { return CapMeasureEvaluator(n)(t); }

}  // namespace capdisc
