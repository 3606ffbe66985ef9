// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "capdisc/discrepancy.hpp"
#include "capdisc/point_set.hpp"
#include "capdisc/subset_algebra.hpp"

namespace capdisc {

/// Rank data of the whole sample's augmented matrix (points over -1).
struct GlobalRankInfo {
  int full_rank = 0;  // rank of the (n+1) x N augmented matrix
  int min_bound = 0;  // min(n, full_rank): largest subset size to enumerate
};

/// Rank via column-pivoted Householder QR of the augmented matrix with
/// relative threshold rank_tol (pivots counted against the largest one).
GlobalRankInfo global_rank_bound(const PointSet& ps, double rank_tol = 1e-10);

struct EnumerationConfig {
  double gamma_tol = 1e-10;
  double rank_tol = 1e-10;
  /// 0: use CAPDISC_THREADS if set, else hardware concurrency.
  int thread_count = 0;
  KernelConvention kernel_convention = KernelConvention::kLastColumn;
  /// Re-derive every candidate's dot products from raw coordinates and check
  /// them against the Gram-based values (1e-9); slow, for tests.
  bool debug_check = false;
};

/// Result of the exact enumeration. delta = max(delta1, delta0), where
/// delta1/delta0 are the maxima over the tangent-cap and great-circle
/// families (0 when a family is empty).
///
/// Subset accounting: subsets_enumerated counts every index set whose rank
/// test ran (of which subsets_skipped_rank failed it and
/// subsets_skipped_gamma had no feasible cap family, degenerate kernels
/// included); subsets_pruned counts descendants of rank-failed sets that
/// were never visited. enumerated + pruned equals the full subset space.
struct DiscrepancyReport {
  double delta = 0.0;
  double delta1 = 0.0;
  double delta0 = 0.0;

  Cap argmax_cap;
  std::vector<int> argmax_subset;
  SubsetFamily argmax_family = SubsetFamily::kPhi1;
  double argmax_emp = 0.0;          // empirical measure of the argmax cap
  double argmax_cap_measure = 0.0;  // cap measure of the argmax cap

  std::uint64_t subsets_enumerated = 0;
  std::uint64_t subsets_skipped_rank = 0;
  std::uint64_t subsets_skipped_gamma = 0;
  std::uint64_t subsets_pruned = 0;

  /// Largest |norm(w)-1| and |<w,x^i>-t| (i in I) over all evaluated
  /// candidate caps; both are ~1e-15 for healthy inputs.
  double max_w_norm_dev = 0.0;
  double max_boundary_dev = 0.0;

  int dim = 0;
  int point_count = 0;
  int full_rank = 0;
  int min_bound = 0;
  double gamma_tol = 0.0;
  double rank_tol = 0.0;
  int thread_count = 1;
  double wall_time_seconds = 0.0;
};

/// Exact spherical cap discrepancy by enumeration of all index sets of size
/// up to min(n, rank of the augmented sample matrix).
///
/// Subsets are generated depth-first in lexicographic order with incremental
/// rank maintenance; every extension of an affinely dependent prefix is
/// pruned (supersets of a dependent set are dependent). Both caps (w,t) and
/// (-w,-t) of every candidate are evaluated. The subset space is partitioned
/// by first index across workers and reduced with a total-order tie-break
/// (value, then family Phi1 before Phi0, then lexicographically smallest
/// index set, then the non-negated cap), so the result is independent of
/// thread count and scheduling, bit for bit.
DiscrepancyReport enumerate_discrepancy(const PointSet& ps,
                                        const EnumerationConfig& config = {});

/// Sum of binomial coefficients C(N,1) + ... + C(N,min_bound), exact.
/// Throws std::overflow_error if the value does not fit 64 bits.
std::uint64_t subset_space_size(int point_count, int min_bound);

/// Thread-count resolution used by enumerate_discrepancy (see
/// EnumerationConfig::thread_count).
int resolve_thread_count(int requested);

}  // namespace capdisc
