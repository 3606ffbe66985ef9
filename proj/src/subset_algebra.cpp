// SPDX-License-Identifier: MIT
#include "capdisc/subset_algebra.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>
#include <string>

#include "capdisc/errors.hpp"

namespace capdisc {

AugmentedGramFactor::AugmentedGramFactor(const Eigen::MatrixXd& gram,
                                         double rank_tol)
    : gram_(&gram), rank_tol_(rank_tol) {}

bool AugmentedGramFactor::push(int j) {
  if (k_ >= kMaxDepth) {
    throw std::invalid_argument("AugmentedGramFactor: path deeper than " +
                                std::to_string(kMaxDepth));
  }
  const Eigen::MatrixXd& g = *gram_;
  const auto col = g.col(j);

  double* row = &lower_[static_cast<std::size_t>(k_) * kMaxDepth];
  // Forward solve L z = b with b_a = G(idx_a, j) + 1, writing z into the row.
  for (int a = 0; a < k_; ++a) {
    double z = col[idx_[a]] + 1.0;
    const double* ra = &lower_[static_cast<std::size_t>(a) * kMaxDepth];
    for (int b = 0; b < a; ++b) z -= ra[b] * row[b];
    row[a] = z / ra[a];
  }
  const double diag = col[j] + 1.0;
  double pivot = diag;
  for (int a = 0; a < k_; ++a) pivot -= row[a] * row[a];

  const double max_diag = k_ == 0 ? diag : std::max(max_diag_[k_ - 1], diag);
  if (!(pivot > rank_tol_ * max_diag)) {
    return false;  // affinely dependent on the path
  }

  row[k_] = std::sqrt(pivot);
  double s = 1.0;
  for (int a = 0; a < k_; ++a) s -= row[a] * u_[a];
  u_[k_] = s / row[k_];
  gamma_[k_] = (k_ == 0 ? 0.0 : gamma_[k_ - 1]) + u_[k_] * u_[k_];
  max_diag_[k_] = max_diag;
  idx_[k_] = j;
  ++k_;
  return true;
}

void AugmentedGramFactor::pop() { --k_; }

void AugmentedGramFactor::solve_ones(double* y) const {
  // Back substitution L^T y = u.
  for (int a = k_ - 1; a >= 0; --a) {
    double s = u_[a];
    for (int b = a + 1; b < k_; ++b) {
      s -= lower_[static_cast<std::size_t>(b) * kMaxDepth + a] * y[b];
    }
    y[a] = s / lower_[static_cast<std::size_t>(a) * kMaxDepth + a];
  }
}

double AugmentedGramFactor::ones_residual() const {
  std::array<double, kMaxDepth> y;
  solve_ones(y.data());
  const Eigen::MatrixXd& g = *gram_;
  double worst = 0.0;
  for (int a = 0; a < k_; ++a) {
    double r = -1.0;
    for (int b = 0; b < k_; ++b) {
      r += (g(idx_[a], idx_[b]) + 1.0) * y[b];
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

Eigen::MatrixXd augmented_gram(const Eigen::MatrixXd& gram,
                               std::span<const int> indices) {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out(a, b) = gram(indices[a], indices[b]) + 1.0;
    }
  }
  return out;
}

Eigen::MatrixXd augmented_gram(const PointSet& ps,
                               std::span<const int> indices) {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double v = ps.point(indices[a]).dot(ps.point(indices[b])) + 1.0;
      out(a, b) = v;
      out(b, a) = v;
    }
  }
  return out;
}

int affine_rank(const Eigen::MatrixXd& gram, std::span<const int> indices,
                double rank_tol) {
  if (indices.empty()) {
    throw std::invalid_argument("affine_rank: empty index set");
  }
  AugmentedGramFactor factor(gram, rank_tol);
  for (int j : indices) {
    factor.push(j);  // dependent columns are skipped, keeping the greedy basis
  }
  return factor.depth();
}

int affine_rank(const PointSet& ps, std::span<const int> indices,
                double rank_tol) {
  return affine_rank(ps.gram(), indices, rank_tol);
}

double subset_gamma(const Eigen::MatrixXd& gram, std::span<const int> indices,
                    double rank_tol) {
  AugmentedGramFactor factor(gram, rank_tol);
  for (int j : indices) {
    if (!factor.push(j)) {
      throw DegenerateSubsetError(
          "subset_gamma: augmented Gram factorization failed at index " +
          std::to_string(j));
    }
  }
  return factor.gamma();
}

double subset_gamma(const PointSet& ps, std::span<const int> indices,
                    double rank_tol) {
  return subset_gamma(ps.gram(), indices, rank_tol);
}

Cap phi1_cap(const PointSet& ps, std::span<const int> indices, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("phi1_cap: gamma must lie in (0,1), got " +
                                std::to_string(gamma));
  }
  const Eigen::MatrixXd aug = augmented_gram(ps, indices);
  const auto k = static_cast<Eigen::Index>(indices.size());
  const Eigen::VectorXd y =
      aug.llt().solve(Eigen::VectorXd::Ones(k));

  const double t = std::sqrt((1.0 - gamma) / gamma);
  const double scale = (1.0 + t * t) / t;
  Cap cap;
  cap.t = t;
  cap.w = Eigen::VectorXd::Zero(ps.dim());
  for (Eigen::Index a = 0; a < k; ++a) {
    cap.w += (scale * y[a]) * ps.point(indices[a]);
  }
  return cap;
}

Eigen::VectorXd phi0_kernel_direction(const PointSet& ps,
                                      std::span<const int> indices,
                                      KernelConvention convention) {
  const int n = ps.dim();
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd cols(n, k);
  for (Eigen::Index a = 0; a < k; ++a) cols.col(a) = ps.point(indices[a]);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cols);
  const Eigen::Index rank = qr.rank();
  if (rank >= n) {
    throw DegenerateSubsetError(
        "phi0_kernel_direction: point columns span the whole space");
  }
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd w = (convention == KernelConvention::kLastColumn)
                          ? q.col(n - 1).eval()
                          : q.col(rank).eval();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w[i] != 0.0) {
      if (w[i] < 0.0) w = -w;
      break;
    }
  }
  if (convention == KernelConvention::kFirstColumnNegated) w = -w;
  const double residual = (cols.transpose() * w).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw DegenerateSubsetError(
        "phi0_kernel_direction: kernel residual " + std::to_string(residual));
  }
  return w;
}

SubsetCandidate classify(const PointSet& ps, const Eigen::MatrixXd& gram,
                         std::span<const int> indices, int min_bound,
                         const SubsetConfig& config,
                         KernelConvention convention) {
  SubsetCandidate out;
  out.indices.assign(indices.begin(), indices.end());
  const int k = static_cast<int>(indices.size());
  if (k < 1 || k > min_bound) {
    throw std::invalid_argument("classify: subset size " + std::to_string(k) +
                                " outside [1, " + std::to_string(min_bound) +
                                "]");
  }

  AugmentedGramFactor factor(gram, config.rank_tol);
  bool full_rank = true;
  for (int j : indices) {
    if (!factor.push(j)) full_rank = false;
  }
  out.aug_rank = factor.depth();
  if (!full_rank) {
    return out;  // kSkip: rank X~_I < #I
  }

  const double gamma = factor.gamma();
  out.gamma = gamma;
  try {
    if (gamma < 1.0 - config.gamma_tol) {
      const Cap cap = phi1_cap(ps, indices, gamma);
      out.family = SubsetFamily::kPhi1;
      out.caps = {cap, Cap{-cap.w, -cap.t}};
    } else if (gamma <= 1.0 + config.gamma_tol && k == min_bound) {
      const Eigen::VectorXd w = phi0_kernel_direction(ps, indices, convention);
      out.family = SubsetFamily::kPhi0;
      out.caps = {Cap{w, 0.0}, Cap{-w, 0.0}};
    }
    // else: gamma > 1 beyond tolerance, or gamma ~ 1 below the size bound;
    // no feasible candidate cap, stays kSkip.
  } catch (const DegenerateSubsetError&) {
    out.family = SubsetFamily::kSkip;
    out.caps.clear();
  }
  return out;
}

SubsetCandidate classify(const PointSet& ps, std::span<const int> indices,
                         int min_bound, const SubsetConfig& config) {
  return classify(ps, ps.gram(), indices, min_bound, config);
}

}  // namespace capdisc
