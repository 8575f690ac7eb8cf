#include "robglasso/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robglasso/errors.hpp"
#include "robglasso/kernels.hpp"

namespace robglasso {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double mean_abs_offdiag(const SymMatrix& s) {
  const std::size_t p = s.dim();
  if (p < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k)
      if (j != k) sum += std::fabs(s(j, k));
  return sum / static_cast<double>(p * (p - 1));
}

// Theta from the current W and the per-column lasso coefficients
// (row j of `beta` holds the coefficients of block j).
SymMatrix recover_theta(const Matrix& w, const Matrix& beta) {
  const std::size_t p = w.rows();
  const auto& k = kernels::active();
  Matrix t(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    // beta(j, j) is always zero, so the full dot equals w12^T beta.
    const double denom = w(j, j) - k.dot(w.row(j).data(), beta.row(j).data(), p);
    const double tjj = 1.0 / denom;
    for (std::size_t i = 0; i < p; ++i) t(i, j) = i == j ? tjj : -beta(j, i) * tjj;
  }
  return SymMatrix(t);
}

}  // namespace

double kkt_check(const SymMatrix& theta, const SymMatrix& s, double rho,
                 bool penalize_diagonal) {
  if (theta.dim() != s.dim()) throw InvalidArgument("kkt_check: dimension mismatch");
  const SymMatrix w = inverse_pd(theta);
  const std::size_t p = theta.dim();
  double worst = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      const double g = w(j, k) - s(j, k);
      const double pen = (j == k && !penalize_diagonal) ? 0.0 : rho;
      const double t = theta(j, k);
      double r;
      if (t != 0.0) {
        r = std::fabs(g - pen * ((t > 0.0) - (t < 0.0)));
      } else {
        r = std::max(0.0, std::fabs(g) - pen);
      }
      worst = std::max(worst, r);
    }
  }
  return worst;
}

double penalized_loglik(const SymMatrix& theta, const SymMatrix& s, double rho,
                        bool penalize_diagonal) {
  const CholeskyResult chol = cholesky(theta);
  if (!chol.ok()) return -std::numeric_limits<double>::infinity();
  double logdet = 0.0;
  for (std::size_t j = 0; j < theta.dim(); ++j) logdet += std::log((*chol.factor)(j, j));
  logdet *= 2.0;
  double l1 = 0.0;
  for (std::size_t j = 0; j < theta.dim(); ++j)
    for (std::size_t k = 0; k < theta.dim(); ++k)
      if (j != k || penalize_diagonal) l1 += std::fabs(theta(j, k));
  return logdet - trace_product(s, theta) - rho * l1;
}

PrecisionEstimate glasso_solve(const CovarianceEstimate& s, const GlassoConfig& cfg) {
  if (!s.psd_certified)
    throw InvalidArgument("glasso_solve: covariance estimate is not certified PSD");
  return glasso_solve(s.S, cfg);
}

PrecisionEstimate glasso_solve(const SymMatrix& s, const GlassoConfig& cfg) {
  const std::size_t p = s.dim();
  if (p == 0) throw InvalidArgument("glasso_solve: empty matrix");
  if (!s.all_finite()) throw NonFiniteInput("glasso_solve: non-finite covariance");
  if (!(cfg.rho >= 0.0) || !std::isfinite(cfg.rho))
    throw InvalidArgument("glasso_solve: rho must be a finite non-negative value");
  if (!(cfg.outer_tol > 0.0) || !(cfg.inner_tol > 0.0) || !(cfg.kkt_tol > 0.0))
    throw InvalidArgument("glasso_solve: tolerances must be positive");
  if (!is_psd(s)) throw InvalidArgument("glasso_solve: covariance is not PSD");
  if (cfg.rho == 0.0 && !cholesky(s).ok())
    throw InvalidArgument("glasso_solve: rho = 0 requires a positive definite S");

  std::vector<std::size_t> order = cfg.column_order;
  if (order.empty()) {
    order.resize(p);
    std::iota(order.begin(), order.end(), 0);
  } else if (order.size() != p) {
    throw InvalidArgument("glasso_solve: column_order must list every column");
  }

  const double rho = cfg.rho;
  const double diag_shift = cfg.penalize_diagonal ? rho : 0.0;
  const auto& k = kernels::active();

  Matrix w = s.to_matrix();
  for (std::size_t j = 0; j < p; ++j) w(j, j) += diag_shift;
  Matrix beta(p, p);

  const double change_tol = cfg.outer_tol * std::max(mean_abs_offdiag(s), 1e-12);
  const double kkt_limit = cfg.kkt_tol * std::max(1.0, s.max_abs());

  PrecisionEstimate out;
  out.rho = rho;

  if (p == 1) {
    out.theta = SymMatrix::diagonal(std::vector<double>{1.0 / w(0, 0)});
    out.W = SymMatrix(w);
    out.kkt_residual = kkt_check(out.theta, s, rho, cfg.penalize_diagonal);
    out.converged = out.kkt_residual <= kkt_limit;
    out.iterations = 1;
    return out;
  }

  std::vector<double> wb(p);
  Matrix w_prev;
  bool have_theta = false;
  for (int it = 1; it <= cfg.max_outer; ++it) {
    w_prev = w;
    for (const std::size_t j : order) {
      auto b = beta.row(j);
      // wb = W11 * beta (entry j is scratch)
      std::fill(wb.begin(), wb.end(), 0.0);
      for (std::size_t m = 0; m < p; ++m)
        if (b[m] != 0.0) k.axpy(b[m], w.row(m).data(), wb.data(), p);

      for (int sweep = 0; sweep < cfg.max_inner; ++sweep) {
        double max_delta = 0.0;
        for (std::size_t m = 0; m < p; ++m) {
          if (m == j) continue;
          const double wmm = w(m, m);
          const double grad = s(j, m) - (wb[m] - wmm * b[m]);
          const double next = soft_threshold(grad, rho) / wmm;
          const double delta = next - b[m];
          if (delta != 0.0) {
            k.axpy(delta, w.row(m).data(), wb.data(), p);
            b[m] = next;
            max_delta = std::max(max_delta, std::fabs(delta));
          }
        }
        if (max_delta < cfg.inner_tol) break;
      }
      for (std::size_t m = 0; m < p; ++m) {
        if (m == j) continue;
        w(j, m) = wb[m];
        w(m, j) = wb[m];
      }
    }
    out.iterations = it;

    const double change = k.sum_abs_diff(w.data().data(), w_prev.data().data(), p * p) /
                          static_cast<double>(p * p);
    const bool want_theta = cfg.record_objective || change <= change_tol;
    if (!want_theta) continue;

    SymMatrix theta = recover_theta(w, beta);
    if (cfg.record_objective) {
      out.objective.push_back(penalized_loglik(theta, s, rho, cfg.penalize_diagonal));
      const CholeskyResult cw = cholesky(SymMatrix(w));
      double ld = -std::numeric_limits<double>::infinity();
      if (cw.ok()) {
        ld = 0.0;
        for (std::size_t j = 0; j < p; ++j) ld += 2.0 * std::log((*cw.factor)(j, j));
      }
      out.dual_objective.push_back(ld);
    }
    if (change > change_tol) continue;
    if (!cholesky(theta).ok()) continue;
    out.theta = std::move(theta);
    have_theta = true;
    out.kkt_residual = kkt_check(out.theta, s, rho, cfg.penalize_diagonal);
    if (out.kkt_residual <= kkt_limit) {
      out.converged = true;
      break;
    }
  }

  out.W = SymMatrix(w);
  if (!out.converged) {
    SymMatrix theta = recover_theta(w, beta);
    if (cholesky(theta).ok()) {
      out.theta = std::move(theta);
      out.kkt_residual = kkt_check(out.theta, s, rho, cfg.penalize_diagonal);
    } else if (!have_theta) {
      // Fall back to the inverse of W, which stays PD for rho > 0.
      out.theta = inverse_pd(out.W);
      out.kkt_residual = kkt_check(out.theta, s, rho, cfg.penalize_diagonal);
    }
  }
  return out;
}

std::size_t SparsityPattern::edge_count() const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t k = j + 1; k < dim_; ++k) c += (*this)(j, k);
  return c;
}

SparsityPattern sparsity_pattern(const SymMatrix& theta, double zero_tol) {
  SparsityPattern pat(theta.dim());
  for (std::size_t j = 0; j < theta.dim(); ++j)
    for (std::size_t k = j; k < theta.dim(); ++k)
      pat.set(j, k, std::fabs(theta(j, k)) > zero_tol);
  return pat;
}

}  // namespace robglasso
