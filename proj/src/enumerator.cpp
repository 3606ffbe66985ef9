// SPDX-License-Identifier: MIT
#include "capdisc/enumerator.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "capdisc/cap_measure.hpp"
#include "capdisc/errors.hpp"

namespace capdisc {

namespace {

using u128 = unsigned __int128;

constexpr int kMaxDepth = AugmentedGramFactor::kMaxDepth;

// --- counting kernels -------------------------------------------------------
//
// For a candidate subset I with solve vector y, the dot product of the
// candidate direction with sample point j is ((1+t^2)/t) * s_j, where
// s_j = sum_a y_a G(j, I_a). Comparing <w,x^j> >= t is equivalent to
// s_j >= tau with tau = t^2/(1+t^2) = 1-gamma, which saves the scaling.
// Points of I itself lie on the cap boundary by construction and are never
// compared (the scan walks the gaps between them); they are added to both
// closed halfspaces afterwards.

template <int K>
void scan_segment(const double* const* cols, const double* y, double tau,
                  int lo, int hi, long& count_ge, long& count_le) {
  long ge = 0, le = 0;
  for (int j = lo; j < hi; ++j) {
    double s = y[0] * cols[0][j];
    if constexpr (K >= 2) s += y[1] * cols[1][j];
    if constexpr (K >= 3) s += y[2] * cols[2][j];
    if constexpr (K >= 4) s += y[3] * cols[3][j];
    ge += s >= tau;
    le += s <= tau;
  }
  count_ge += ge;
  count_le += le;
}

void scan_segment_any(const double* const* cols, const double* y, int k,
                      double tau, int lo, int hi, long& count_ge,
                      long& count_le) {
  long ge = 0, le = 0;
  for (int j = lo; j < hi; ++j) {
    double s = 0.0;
    for (int a = 0; a < k; ++a) s += y[a] * cols[a][j];
    ge += s >= tau;
    le += s <= tau;
  }
  count_ge += ge;
  count_le += le;
}

// Counts over all j outside the (ascending) index path.
void scan_excluding(const double* const* cols, const double* y, int k,
                    double tau, std::span<const int> path, int n_points,
                    long& count_ge, long& count_le) {
  count_ge = 0;
  count_le = 0;
  int lo = 0;
  for (int a = 0; a <= k; ++a) {
    const int hi = (a < k) ? path[a] : n_points;
    switch (k) {
      case 1: scan_segment<1>(cols, y, tau, lo, hi, count_ge, count_le); break;
      case 2: scan_segment<2>(cols, y, tau, lo, hi, count_ge, count_le); break;
      case 3: scan_segment<3>(cols, y, tau, lo, hi, count_ge, count_le); break;
      case 4: scan_segment<4>(cols, y, tau, lo, hi, count_ge, count_le); break;
      default:
        scan_segment_any(cols, y, k, tau, lo, hi, count_ge, count_le);
    }
    lo = hi + 1;
  }
}

// --- candidate bookkeeping --------------------------------------------------

struct BestCandidate {
  double value = -1.0;
  SubsetFamily family = SubsetFamily::kPhi1;
  std::vector<int> indices;
  bool negated = false;
  Cap cap;
  double emp = 0.0;
  double cap_measure = 0.0;
};

int family_order(SubsetFamily f) { return f == SubsetFamily::kPhi1 ? 0 : 1; }

// Total order: larger value first, then Phi1 before Phi0, then the
// lexicographically smallest index set, then the non-negated cap.
bool better_than(const BestCandidate& a, const BestCandidate& b) {
  if (a.value != b.value) return a.value > b.value;
  if (family_order(a.family) != family_order(b.family)) {
    return family_order(a.family) < family_order(b.family);
  }
  if (a.indices != b.indices) {
    return std::lexicographical_compare(a.indices.begin(), a.indices.end(),
                                        b.indices.begin(), b.indices.end());
  }
  return a.negated < b.negated;
}

struct SharedData {
  const PointSet& ps;
  const Eigen::MatrixXd& gram;
  const CapMeasureEvaluator& eval;
  const EnumerationConfig& config;
  const std::vector<std::array<u128, kMaxDepth + 1>>& binom;
  int n_points;
  int min_bound;
};

class Worker {
 public:
  Worker(const SharedData& shared)
      : shared_(shared),
        factor_(shared.gram, shared.config.rank_tol),
        w_buf_(shared.ps.dim()),
        dots_buf_(shared.n_points) {}

  void process_root(int root) {
    if (!factor_.push(root)) {
      // A unit point always yields pivot 2; only a corrupt Gram gets here.
      throw DegenerateSubsetError("enumerate: singleton rejected at index " +
                                  std::to_string(root));
    }
    col_ptr_[0] = shared_.gram.col(root).data();
    ++enumerated;
    visit();
    descend();
    factor_.pop();
  }

  // Accumulators, merged by the driver after the workers join.
  std::uint64_t enumerated = 0;
  std::uint64_t skipped_rank = 0;
  std::uint64_t skipped_gamma = 0;
  u128 pruned = 0;
  double delta1 = 0.0;
  double delta0 = 0.0;
  double max_w_dev = 0.0;
  double max_boundary_dev = 0.0;
  BestCandidate best;

 private:
  void descend() {
    const int depth = factor_.depth();
    if (depth >= shared_.min_bound) return;
    const int last = factor_.indices()[depth - 1];
    for (int j = last + 1; j < shared_.n_points; ++j) {
      ++enumerated;
      if (factor_.push(j)) {
        col_ptr_[depth] = shared_.gram.col(j).data();
        visit();
        descend();
        factor_.pop();
      } else {
        ++skipped_rank;
        // Every extension of the dependent set {path, j} is dependent too.
        const int levels_left = shared_.min_bound - depth - 1;
        const auto& row = shared_.binom[shared_.n_points - 1 - j];
        for (int i = 1; i <= levels_left; ++i) pruned += row[i];
      }
    }
  }

  void visit() {
    const int k = factor_.depth();
    const double gamma = factor_.gamma();
    const auto path = factor_.indices();

    if (gamma < 1.0 - shared_.config.gamma_tol) {
      factor_.solve_ones(y_.data());
      const double t = std::sqrt((1.0 - gamma) / gamma);
      const double tau = 1.0 - gamma;
      long count_ge = 0, count_le = 0;
      scan_excluding(col_ptr_.data(), y_.data(), k, tau, path,
                     shared_.n_points, count_ge, count_le);
      const double n = static_cast<double>(shared_.n_points);
      const double emp_pos = (count_ge + k) / n;
      const double emp_neg = (count_le + k) / n;
      const double mu = shared_.eval(t);
      record_candidate_pair(SubsetFamily::kPhi1, path, t, emp_pos, emp_neg, mu,
                            delta1);
      track_phi1_deviation(path, k, t, gamma);
      if (shared_.config.debug_check) debug_check_phi1(path, k, t, gamma);
    } else if (gamma <= 1.0 + shared_.config.gamma_tol &&
               k == shared_.min_bound) {
      try {
        visit_phi0(path, k);
      } catch (const DegenerateSubsetError&) {
        ++skipped_gamma;
      }
    } else {
      ++skipped_gamma;
    }
  }

  void visit_phi0(std::span<const int> path, int k) {
    const Eigen::VectorXd w = phi0_kernel_direction(
        shared_.ps, path, shared_.config.kernel_convention);
    Eigen::Map<Eigen::VectorXd> dots(dots_buf_.data(), shared_.n_points);
    dots.noalias() = shared_.ps.matrix().transpose() * w;

    const double* dot_col = dots_buf_.data();
    const double one = 1.0;
    long count_ge = 0, count_le = 0;
    scan_excluding(&dot_col, &one, 1, 0.0, path, shared_.n_points, count_ge,
                   count_le);
    const double n = static_cast<double>(shared_.n_points);
    const double emp_pos = (count_ge + k) / n;
    const double emp_neg = (count_le + k) / n;

    max_w_dev = std::max(max_w_dev, std::abs(w.norm() - 1.0));
    for (int a = 0; a < k; ++a) {
      max_boundary_dev =
          std::max(max_boundary_dev, std::abs(dots_buf_[path[a]]));
    }
    latest_w_ = w;
    record_candidate_pair(SubsetFamily::kPhi0, path, 0.0, emp_pos, emp_neg,
                          0.5, delta0);
    if (shared_.config.debug_check) {
      // Kernel caps are evaluated from raw dot products already; nothing to
      // cross-check beyond the residual done in phi0_kernel_direction.
    }
  }

  // Evaluates |emp - mu| for the cap and its negation and updates the family
  // maximum and the overall best candidate.
  void record_candidate_pair(SubsetFamily family, std::span<const int> path,
                             double t, double emp_pos, double emp_neg,
                             double mu, double& family_max) {
    const double d_pos = std::abs(emp_pos - mu);
    const double d_neg = std::abs(emp_neg - (1.0 - mu));
    family_max = std::max(family_max, std::max(d_pos, d_neg));

    if (d_pos >= best.value) {
      offer(family, path, t, false, d_pos, emp_pos, mu);
    }
    if (d_neg >= best.value) {
      offer(family, path, t, true, d_neg, emp_neg, 1.0 - mu);
    }
  }

  void offer(SubsetFamily family, std::span<const int> path, double t,
             bool negated, double value, double emp, double mu) {
    BestCandidate cand;
    cand.value = value;
    cand.family = family;
    cand.indices.assign(path.begin(), path.end());
    cand.negated = negated;
    cand.cap = materialize_cap(family, path, t, negated);
    cand.emp = emp;
    cand.cap_measure = mu;
    if (better_than(cand, best)) best = std::move(cand);
  }

  Cap materialize_cap(SubsetFamily family, std::span<const int> path, double t,
                      bool negated) {
    Cap cap;
    if (family == SubsetFamily::kPhi1) {
      const double scale = (1.0 + t * t) / t;
      Eigen::Map<Eigen::VectorXd> w(w_buf_.data(), shared_.ps.dim());
      w.setZero();
      for (std::size_t a = 0; a < path.size(); ++a) {
        w += (scale * y_[a]) * shared_.ps.point(path[a]);
      }
      cap.w = w;
    } else {
      cap.w = latest_w_;
    }
    cap.t = std::clamp(t, -1.0, 1.0);
    if (negated) {
      cap.w = -cap.w;
      cap.t = -cap.t;
    }
    return cap;
  }

  // norm(w) = 1 and <w,x^i> = t for i in I hold analytically; track how far
  // floating arithmetic drifts from them across all candidates.
  void track_phi1_deviation(std::span<const int> path, int k, double t,
                            double gamma) {
    const double scale = (1.0 + t * t) / t;
    Eigen::Map<Eigen::VectorXd> w(w_buf_.data(), shared_.ps.dim());
    w.setZero();
    for (int a = 0; a < k; ++a) {
      w += (scale * y_[a]) * shared_.ps.point(path[a]);
    }
    max_w_dev = std::max(max_w_dev, std::abs(w.norm() - 1.0));
    for (int a = 0; a < k; ++a) {
      double s = 0.0;
      for (int b = 0; b < k; ++b) s += y_[b] * col_ptr_[b][path[a]];
      max_boundary_dev = std::max(max_boundary_dev, std::abs(scale * s - t));
    }
    (void)gamma;
  }

  void debug_check_phi1(std::span<const int> path, int k, double t,
                        double gamma) {
    const double scale = (1.0 + t * t) / t;
    Eigen::Map<Eigen::VectorXd> w(w_buf_.data(), shared_.ps.dim());
    w.setZero();
    for (int a = 0; a < k; ++a) {
      w += (scale * y_[a]) * shared_.ps.point(path[a]);
    }
    for (int j = 0; j < shared_.n_points; ++j) {
      double s = 0.0;
      for (int a = 0; a < k; ++a) s += y_[a] * col_ptr_[a][j];
      const double raw = w.dot(shared_.ps.point(j));
      if (std::abs(raw - scale * s) > 1e-9) {
        throw std::logic_error(
            "enumerate debug check: Gram-based dot product deviates by " +
            std::to_string(std::abs(raw - scale * s)));
      }
    }
    (void)gamma;
  }

  const SharedData& shared_;
  AugmentedGramFactor factor_;
  std::array<const double*, kMaxDepth> col_ptr_{};
  std::array<double, kMaxDepth> y_{};
  std::vector<double> w_buf_;
  std::vector<double> dots_buf_;
  Eigen::VectorXd latest_w_;
};

std::vector<std::array<u128, kMaxDepth + 1>> binomial_table(int n, int k_max) {
  std::vector<std::array<u128, kMaxDepth + 1>> table(n + 1);
  for (int m = 0; m <= n; ++m) {
    table[m][0] = 1;
    for (int i = 1; i <= k_max; ++i) {
      table[m][i] = (m == 0) ? 0 : table[m - 1][i - 1] + table[m - 1][i];
    }
    for (int i = k_max + 1; i <= kMaxDepth; ++i) table[m][i] = 0;
  }
  return table;
}

std::uint64_t checked_u64(u128 v, const char* what) {
  if (v > static_cast<u128>(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error(std::string(what) + " exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

GlobalRankInfo global_rank_bound(const PointSet& ps, double rank_tol) {
  const int n = ps.dim();
  Eigen::MatrixXd augmented(n + 1, ps.size());
  augmented.topRows(n) = ps.matrix();
  augmented.row(n).setConstant(-1.0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(augmented);
  qr.setThreshold(rank_tol);
  GlobalRankInfo info;
  info.full_rank = static_cast<int>(qr.rank());
  info.min_bound = std::min(n, info.full_rank);
  return info;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAPDISC_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t subset_space_size(int point_count, int min_bound) {
  if (min_bound < 1 || min_bound > point_count) {
    throw std::invalid_argument("subset_space_size: need 1 <= min_bound <= N");
  }
  u128 total = 0;
  u128 binom = 1;
  for (int i = 1; i <= min_bound; ++i) {
    binom = binom * static_cast<u128>(point_count - i + 1) /
            static_cast<u128>(i);
    total += binom;
    checked_u64(total, "subset_space_size");
  }
  return checked_u64(total, "subset_space_size");
}

DiscrepancyReport enumerate_discrepancy(const PointSet& ps,
                                        const EnumerationConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  const int n_points = ps.size();
  const GlobalRankInfo rank_info = global_rank_bound(ps, config.rank_tol);
  if (rank_info.min_bound > kMaxDepth) {
    throw std::invalid_argument("enumerate: subset size bound " +
                                std::to_string(rank_info.min_bound) +
                                " exceeds supported maximum " +
                                std::to_string(kMaxDepth));
  }

  const Eigen::MatrixXd gram = ps.gram();
  const CapMeasureEvaluator eval(ps.dim());
  const auto binom = binomial_table(n_points, rank_info.min_bound);
  const SharedData shared{ps,    gram,     eval,
                          config, binom,    n_points,
                          rank_info.min_bound};

  const int threads =
      std::min(resolve_thread_count(config.thread_count), n_points);
  std::vector<Worker> workers;
  workers.reserve(threads);
  for (int i = 0; i < threads; ++i) workers.emplace_back(shared);

  // Roots (first indices) are handed out dynamically; each root's subtree is
  // a pure function of the input, so the partition does not affect results.
  std::atomic<int> next_root{0};
  auto drive = [&](Worker& w) {
    for (int root = next_root.fetch_add(1); root < n_points;
         root = next_root.fetch_add(1)) {
      w.process_root(root);
    }
  };

  if (threads == 1) {
    drive(workers[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (auto& w : workers) pool.emplace_back(drive, std::ref(w));
    for (auto& th : pool) th.join();
  }

  DiscrepancyReport report;
  u128 pruned = 0;
  BestCandidate best;
  for (auto& w : workers) {
    report.subsets_enumerated += w.enumerated;
    report.subsets_skipped_rank += w.skipped_rank;
    report.subsets_skipped_gamma += w.skipped_gamma;
    pruned += w.pruned;
    report.delta1 = std::max(report.delta1, w.delta1);
    report.delta0 = std::max(report.delta0, w.delta0);
    report.max_w_norm_dev = std::max(report.max_w_norm_dev, w.max_w_dev);
    report.max_boundary_dev =
        std::max(report.max_boundary_dev, w.max_boundary_dev);
    if (w.best.value >= 0.0 && better_than(w.best, best)) {
      best = std::move(w.best);
    }
  }
  report.subsets_pruned = checked_u64(pruned, "pruned subset count");
  report.delta = std::max(report.delta1, report.delta0);
  report.argmax_cap = std::move(best.cap);
  report.argmax_subset = std::move(best.indices);
  report.argmax_family = best.family;
  report.argmax_emp = best.emp;
  report.argmax_cap_measure = best.cap_measure;

  report.dim = ps.dim();
  report.point_count = n_points;
  report.full_rank = rank_info.full_rank;
  report.min_bound = rank_info.min_bound;
  report.gamma_tol = config.gamma_tol;
  report.rank_tol = config.rank_tol;
  report.thread_count = threads;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace capdisc
