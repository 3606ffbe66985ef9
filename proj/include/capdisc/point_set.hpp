// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Core>

namespace capdisc {

/// A sample of N unit vectors on S^{n-1}, stored as the columns of an
/// n x N matrix. Immutable after construction.
class PointSet {
 public:
  /// Maximum |norm - 1| accepted at load time. Points inside the tolerance
  /// are renormalized to machine precision; points outside raise
  /// UnitNormError listing all offenders.
  static constexpr double kUnitTolerance = 1e-9;

  /// points: n x N, one point per column, n >= 2, N >= 1.
  explicit PointSet(Eigen::MatrixXd points);

  int dim() const noexcept { return static_cast<int>(points_.rows()); }
  int size() const noexcept { return static_cast<int>(points_.cols()); }

  const Eigen::MatrixXd& matrix() const noexcept { return points_; }
  Eigen::MatrixXd::ConstColXpr point(int i) const { return points_.col(i); }

  /// N x N Gram matrix X^T X, exactly symmetric (lower triangle mirrored).
  Eigen::MatrixXd gram() const;

 private:
  Eigen::MatrixXd points_;
};

}  // namespace capdisc
