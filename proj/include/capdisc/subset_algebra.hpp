// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <span>
#include <vector>

#include "capdisc/discrepancy.hpp"
#include "capdisc/point_set.hpp"

namespace capdisc {

/// Tolerances for the per-subset linear algebra. gamma_tol separates the
/// tangent-cap family (gamma < 1) from the great-circle family (gamma = 1);
/// rank_tol is the relative pivot threshold of the rank test.
struct SubsetConfig {
  double gamma_tol = 1e-10;
  double rank_tol = 1e-10;
};

enum class SubsetFamily { kPhi1, kPhi0, kSkip };

/// Which vector of the kernel basis a great-circle subset yields. The choice
/// is mathematically arbitrary; two fixed conventions are provided so that
/// invariance of the result under the choice can be tested.
enum class KernelConvention { kLastColumn, kFirstColumnNegated };

/// Classification of one index set: its augmented rank, gamma value (present
/// iff the augmented matrix has full column rank), family, and the candidate
/// cap pair it induces (empty for kSkip).
struct SubsetCandidate {
  std::vector<int> indices;
  int aug_rank = 0;
  std::optional<double> gamma;
  SubsetFamily family = SubsetFamily::kSkip;
  std::vector<Cap> caps;
};

/// Incremental Cholesky factorization of the augmented Gram matrix
/// G(I,I) + 1 for an index path grown one element at a time.
///
/// Entry (a,b) of the augmented Gram is <x^a, x^b> + 1, i.e. the Gram matrix
/// of the points with a row of -1 appended. The factorization maintains,
/// per pushed index, one new row of the lower-triangular factor L together
/// with the solve u = L^{-1} 1, so that
///   gamma = 1^T (G(I,I)+1)^{-1} 1 = ||u||^2
/// is available in O(1) and grows monotonically along the path.
///
/// push() rejects an index whose augmented column is (numerically) in the
/// span of the current path; since column subsets of a full-column-rank
/// matrix keep full rank, every prefix of an accepted path is independent.
class AugmentedGramFactor {
 public:
  static constexpr int kMaxDepth = 16;

  /// gram: the full N x N Gram matrix of the sample (kept by reference).
  AugmentedGramFactor(const Eigen::MatrixXd& gram, double rank_tol);

  /// Extends the path by point index j. Returns false (state unchanged)
  /// when the pivot falls below rank_tol times the largest diagonal seen,
  /// i.e. the new point is affinely dependent on the path.
  bool push(int j);
  void pop();

  int depth() const noexcept { return k_; }
  std::span<const int> indices() const noexcept { return {idx_.data(), static_cast<std::size_t>(k_)}; }

  /// 1^T (G(I,I)+1)^{-1} 1 for the current path (positive by construction).
  /// Stored per level, so the value is a pure function of the path and does
  /// not drift across push/pop cycles.
  double gamma() const noexcept { return k_ == 0 ? 0.0 : gamma_[k_ - 1]; }

  /// Writes y = (G(I,I)+1)^{-1} 1 into y[0..depth).
  void solve_ones(double* y) const;

  /// Residual check max_a |(A y - 1)_a| for y from solve_ones; used by the
  /// debug path to detect a factorization gone bad despite the rank check.
  double ones_residual() const;

 private:
  const Eigen::MatrixXd* gram_;
  double rank_tol_;
  int k_ = 0;
  std::array<double, kMaxDepth * kMaxDepth> lower_{};  // row-major L
  std::array<double, kMaxDepth> u_{};                  // L^{-1} 1
  std::array<double, kMaxDepth> gamma_{};              // ||u||^2, per level
  std::array<double, kMaxDepth> max_diag_{};           // running max, per level
  std::array<int, kMaxDepth> idx_{};
};

/// Augmented Gram matrix G(I,I) + 1 of the index set.
Eigen::MatrixXd augmented_gram(const Eigen::MatrixXd& gram,
                               std::span<const int> indices);
Eigen::MatrixXd augmented_gram(const PointSet& ps, std::span<const int> indices);

/// Rank of the augmented matrix of the subset (points stacked over -1).
///
/// Computed as the number of columns accepted by the incremental Cholesky
/// of the augmented Gram, processing indices in the given order and skipping
/// dependent columns (greedy basis extension); a pivot counts when it
/// exceeds rank_tol times the largest augmented diagonal. Deterministic.
int affine_rank(const Eigen::MatrixXd& gram, std::span<const int> indices,
                double rank_tol = 1e-10);
int affine_rank(const PointSet& ps, std::span<const int> indices,
                double rank_tol = 1e-10);

/// gamma = 1^T (G(I,I)+1)^{-1} 1 via the SPD factorization.
///
/// Pre: the subset is affinely independent (full augmented rank). Throws
/// DegenerateSubsetError if the factorization fails anyway.
double subset_gamma(const Eigen::MatrixXd& gram, std::span<const int> indices,
                    double rank_tol = 1e-10);
double subset_gamma(const PointSet& ps, std::span<const int> indices,
                    double rank_tol = 1e-10);

/// The tangent cap of an affinely independent subset with gamma < 1:
///   t = sqrt((1-gamma)/gamma),  w = ((1+t^2)/t) X_I y,  y = (G(I,I)+1)^{-1} 1.
/// w is unit and satisfies <w, x^i> = t for i in I up to rounding (both hold
/// analytically). The negated cap (-w, -t) is the caller's to evaluate.
Cap phi1_cap(const PointSet& ps, std::span<const int> indices, double gamma);

/// A unit vector orthogonal to all points of the subset, from a column-pivoted
/// Householder QR of the point columns: the trailing column of Q (or the first
/// orthogonal-complement column, negated, under the alternate convention),
/// sign-fixed so its first nonzero component is positive.
/// Throws DegenerateSubsetError when no numerically clean kernel exists.
Eigen::VectorXd phi0_kernel_direction(const PointSet& ps,
                                      std::span<const int> indices,
                                      KernelConvention convention =
                                          KernelConvention::kLastColumn);

/// Full classification of one index set, 1 <= #I <= min_bound:
///  - kSkip when the augmented rank is below #I, when gamma exceeds 1 beyond
///    tolerance (no feasible tangent cap), when gamma is 1 within tolerance
///    but #I < min_bound, or when a degenerate-subset error occurs;
///  - kPhi1 with the tangent cap pair when gamma < 1 - gamma_tol;
///  - kPhi0 with the kernel cap pair (threshold 0) when |gamma - 1| <=
///    gamma_tol and #I = min_bound.
SubsetCandidate classify(const PointSet& ps, const Eigen::MatrixXd& gram,
                         std::span<const int> indices, int min_bound,
                         const SubsetConfig& config = {},
                         KernelConvention convention =
                             KernelConvention::kLastColumn);
SubsetCandidate classify(const PointSet& ps, std::span<const int> indices,
                         int min_bound, const SubsetConfig& config = {});

}  // namespace capdisc
