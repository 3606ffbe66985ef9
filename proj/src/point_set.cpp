// SPDX-License-Identifier: MIT
#include "capdisc/point_set.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "capdisc/errors.hpp"

namespace capdisc {

PointSet::PointSet(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 2) {
    throw std::invalid_argument("PointSet: ambient dimension must be >= 2, got " +
                                std::to_string(points_.rows()));
  }
  if (points_.cols() < 1) {
    throw std::invalid_argument("PointSet: need at least one point");
  }

  std::vector<int> offenders;
  for (int i = 0; i < points_.cols(); ++i) {
    const double norm = points_.col(i).norm();
    if (std::abs(norm - 1.0) > kUnitTolerance) {
      offenders.push_back(i);
    }
  }
  if (!offenders.empty()) {
    throw UnitNormError("PointSet: " + std::to_string(offenders.size()) +
                            " point(s) deviate from unit norm by more than " +
                            std::to_string(kUnitTolerance),
                        std::move(offenders));
  }

  // Renormalize, but leave points that are already unit to the last bit
  // untouched so that write/parse round trips are byte-stable.
  constexpr double kSkip = 4.0 * std::numeric_limits<double>::epsilon();
  for (int i = 0; i < points_.cols(); ++i) {
    const double sq = points_.col(i).squaredNorm();
    if (std::abs(sq - 1.0) > kSkip) {
      points_.col(i) /= std::sqrt(sq);
    }
  }
}

Eigen::MatrixXd PointSet::gram() const {
  const auto n = points_.cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  g.selfadjointView<Eigen::Lower>().rankUpdate(points_.transpose());
  g.triangularView<Eigen::StrictlyUpper>() =
      g.transpose().triangularView<Eigen::StrictlyUpper>();
  return g;
}

}  // namespace capdisc
