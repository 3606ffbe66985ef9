// SPDX-License-Identifier: MIT
#include "capdisc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace capdisc {

void validate_cap(const Cap& cap, int dim) {
  if (cap.w.size() != dim) {
    throw std::invalid_argument("Cap: direction has dimension " +
                                std::to_string(cap.w.size()) + ", expected " +
                                std::to_string(dim));
  }
  if (std::abs(cap.w.norm() - 1.0) > Cap::kNormTolerance) {
    throw std::invalid_argument("Cap: direction is not unit length");
  }
  if (!(cap.t >= -1.0 && cap.t <= 1.0)) {
    throw std::invalid_argument("Cap: threshold outside [-1, 1]");
  }
}

double empirical_measure(const PointSet& ps, const Cap& cap,
                         double boundary_tol) {
  validate_cap(cap, ps.dim());
  const double cut = cap.t - boundary_tol;
  long count = 0;
  for (int i = 0; i < ps.size(); ++i) {
    count += ps.point(i).dot(cap.w) >= cut;
  }
  return static_cast<double>(count) / ps.size();
}

double local_discrepancy(const PointSet& ps, const CapMeasureEvaluator& eval,
                         const Cap& cap) {
  return std::abs(empirical_measure(ps, cap) - eval(cap.t));
}

double local_discrepancy(const PointSet& ps, const Cap& cap) {
  return local_discrepancy(ps, CapMeasureEvaluator(ps.dim()), cap);
}

DirectionalSupremum supremum_from_dots(std::span<double> dots,
                                       const CapMeasureEvaluator& eval) {
  if (dots.empty()) {
    throw std::invalid_argument("supremum_from_dots: empty point set");
  }
  std::sort(dots.begin(), dots.end(), std::greater<>());
  const double n = static_cast<double>(dots.size());

  DirectionalSupremum best;
  best.value = -1.0;
  std::size_t k = 0;
  long count_above = 0;  // points with dot > current threshold
  while (k < dots.size()) {
    const double d = dots[k];
    std::size_t same = k;
    while (same < dots.size() && dots[same] == d) ++same;
    const long count_at = static_cast<long>(same);  // points with dot >= d

    // Attained at t = d: emp jumps up to count_at/N here.
    const double mu = eval(d);
    const double at_value = std::abs(count_at / n - mu);
    if (at_value > best.value) {
      best = {at_value, d, SupSide::kAtThreshold};
    }
    // Limit t -> d from above: emp still count_above/N, cap measure -> mu.
    const double lim_value = std::abs(count_above / n - mu);
    if (lim_value > best.value) {
      best = {lim_value, d, SupSide::kLimitFromAbove};
    }

    count_above = count_at;
    k = same;
  }
  return best;
}

DirectionalSupremum directional_supremum(const PointSet& ps,
                                         const CapMeasureEvaluator& eval,
                                         const Eigen::VectorXd& w) {
  if (std::abs(w.norm() - 1.0) > Cap::kNormTolerance) {
    throw std::invalid_argument("directional_supremum: direction not unit");
  }
  std::vector<double> dots(ps.size());
  Eigen::Map<Eigen::VectorXd>(dots.data(), ps.size()).noalias() =
      ps.matrix().transpose() * w;
  return supremum_from_dots(dots, eval);
}

DirectionalSupremum directional_supremum(const PointSet& ps,
                                         const Eigen::VectorXd& w) {
  return directional_supremum(ps, CapMeasureEvaluator(ps.dim()), w);
}

LowerBoundDetail lower_bound_detail(const PointSet& ps) {
  const CapMeasureEvaluator eval(ps.dim());
  LowerBoundDetail out;
  out.per_point.reserve(ps.size());
  std::vector<double> dots(ps.size());
  for (int i = 0; i < ps.size(); ++i) {
    Eigen::Map<Eigen::VectorXd>(dots.data(), ps.size()).noalias() =
        ps.matrix().transpose() * ps.matrix().col(i);
    const DirectionalSupremum sup = supremum_from_dots(dots, eval);
    out.per_point.push_back(sup);
    out.value = std::max(out.value, sup.value);
  }
  return out;
}

double lower_bound(const PointSet& ps) { return lower_bound_detail(ps).value; }

}  // namespace capdisc
