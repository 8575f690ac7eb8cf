#pragma once

#include <cstddef>
#include <vector>

#include "robglasso/covariance.hpp"
#include "robglasso/linalg.hpp"

namespace robglasso {

inline constexpr double kDefaultZeroTol = 1e-8;

struct GlassoConfig {
  double rho = 0.1;
  /// Outer stop: mean |W_t - W_{t-1}| <= outer_tol * mean |offdiag(S)|.
  double outer_tol = 1e-4;
  int max_outer = 100;
  /// Inner stop: largest coefficient change in a coordinate sweep.
  double inner_tol = 1e-6;
  int max_inner = 1000;
  bool penalize_diagonal = true;
  /// Convergence also requires kkt_check <= kkt_tol * max(1, max |S_jk|).
  double kkt_tol = 1e-5;
  /// Record the penalized log-likelihood after every outer sweep.
  bool record_objective = false;
  /// Column visiting order; empty means 0..p-1.
  std::vector<std::size_t> column_order;
};

struct PrecisionEstimate {
  SymMatrix theta;
  double rho = 0.0;
  SymMatrix W;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Penalized log-likelihood at each outer iterate (when recorded).
  std::vector<double> objective;
  /// log det W at each outer iterate (when recorded).
  std::vector<double> dual_objective;
};

/// Maximizes log det(Theta) - tr(S Theta) - rho sum |theta_jk| by block
/// coordinate descent over the columns of W = Theta^{-1}, each block being a
/// lasso solved by cyclic coordinate descent.
///
/// Throws InvalidArgument when S is not PSD, rho < 0, or rho == 0 with a
/// singular S. Non-convergence is reported through `converged`.
PrecisionEstimate glasso_solve(const CovarianceEstimate& s, const GlassoConfig& cfg);
PrecisionEstimate glasso_solve(const SymMatrix& s, const GlassoConfig& cfg);

/// Subgradient residual of the first-order condition
/// Theta^{-1} - S - rho Sign(Theta) = 0. Throws NotPositiveDefinite.
double kkt_check(const SymMatrix& theta, const SymMatrix& s, double rho,
                 bool penalize_diagonal = true);

/// log det(Theta) - tr(S Theta) - rho sum |theta_jk|; -inf when Theta is not PD.
double penalized_loglik(const SymMatrix& theta, const SymMatrix& s, double rho,
                        bool penalize_diagonal = true);

class SparsityPattern {
 public:
  SparsityPattern() = default;
  explicit SparsityPattern(std::size_t dim) : dim_(dim), mask_(dim * dim, 0) {}

  std::size_t dim() const noexcept { return dim_; }
  bool operator()(std::size_t j, std::size_t k) const { return mask_[j * dim_ + k] != 0; }
  void set(std::size_t j, std::size_t k, bool v) {
    mask_[j * dim_ + k] = v;
    mask_[k * dim_ + j] = v;
  }
  /// Nonzero entries with j < k.
  std::size_t edge_count() const;

 private:
  std::size_t dim_ = 0;
  std::vector<unsigned char> mask_;
};

/// |theta_jk| > zero_tol.
SparsityPattern sparsity_pattern(const SymMatrix& theta, double zero_tol = kDefaultZeroTol);

}  // namespace robglasso
