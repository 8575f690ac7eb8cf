#include "robglasso/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robglasso/errors.hpp"
#include "robglasso/rng.hpp"
#include "robglasso/robust_scale.hpp"

namespace robglasso {

RhoGrid rho_grid(const SymMatrix& s) {
  const std::size_t p = s.dim();
  if (p == 0) throw InvalidArgument("rho_grid: empty matrix");
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      const double v = s(j, k) - (j == k ? 1.0 : 0.0);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
  }
  RhoGrid g;
  g.rho_max = std::max(hi - lo, kRhoFloor);
  g.rho_min = 0.1 * g.rho_max;
  g.values.resize(kRhoGridSize);
  const double log_hi = std::log(g.rho_max);
  const double log_lo = std::log(g.rho_min);
  const double step = (log_hi - log_lo) / static_cast<double>(kRhoGridSize - 1);
  for (std::size_t i = 0; i < kRhoGridSize; ++i)
    g.values[i] = std::exp(log_hi - step * static_cast<double>(i));
  g.values.front() = g.rho_max;
  g.values.back() = g.rho_min;
  return g;
}

RhoGrid rho_grid(const CovarianceEstimate& s) { return rho_grid(s.S); }

std::size_t argmin_prefer_larger_rho(const std::vector<double>& scores) {
  if (scores.empty()) throw InvalidArgument("argmin: empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] < scores[best]) best = i;
  return best;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t folds,
                                                 std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("cross-validation needs K >= 2");
  if (folds > n) throw FoldTooSmall(folds, 0);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
    out[f].assign(perm.begin() + static_cast<long>(pos),
                  perm.begin() + static_cast<long>(pos + size));
    pos += size;
  }
  return out;
}

double neg_loglik(const SymMatrix& theta, const SymMatrix& s) {
  return -log_det_pd(theta) + trace_product(s, theta);
}

RhoSelection cv_select(const DataMatrix& x, const CovarianceBuilder& builder,
                       const CvOptions& opts, const CovarianceEstimate* full_data) {
  const std::size_t n = x.rows();
  const auto folds = make_folds(n, opts.folds, opts.seed);
  std::size_t smallest = n;
  for (const auto& f : folds) smallest = std::min(smallest, f.size());
  if (smallest < 3 || n - folds.front().size() < 3) throw FoldTooSmall(opts.folds, smallest);

  RhoSelection sel;
  sel.method = SelectionMethod::CrossValidation;
  sel.folds = opts.folds;
  sel.grid = full_data != nullptr ? rho_grid(*full_data) : rho_grid(builder(x));
  const std::size_t g = sel.grid.values.size();

  std::vector<std::vector<double>> losses(g, std::vector<double>(folds.size()));
  std::vector<unsigned char> in_test(n);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t i : folds[f]) in_test[i] = 1;
    std::vector<std::size_t> train;
    train.reserve(n - folds[f].size());
    for (std::size_t i = 0; i < n; ++i)
      if (!in_test[i]) train.push_back(i);
    std::vector<std::size_t> test = folds[f];
    std::sort(test.begin(), test.end());

    const CovarianceEstimate s_train = builder(x.select_rows(train));
    const CovarianceEstimate s_test = builder(x.select_rows(test));
    for (std::size_t r = 0; r < g; ++r) {
      GlassoConfig cfg = opts.solver;
      cfg.rho = sel.grid.values[r];
      const PrecisionEstimate est = glasso_solve(s_train, cfg);
      losses[r][f] = neg_loglik(est.theta, s_test.S);
    }
  }

  sel.scores.resize(g);
  for (std::size_t r = 0; r < g; ++r) {
    if (opts.aggregation == FoldAggregation::Median) {
      sel.scores[r] = median(losses[r]);
    } else {
      sel.scores[r] = std::accumulate(losses[r].begin(), losses[r].end(), 0.0) /
                      static_cast<double>(folds.size());
    }
  }
  sel.chosen_index = argmin_prefer_larger_rho(sel.scores);
  sel.chosen_rho = sel.grid.values[sel.chosen_index];
  return sel;
}

RhoSelection bic_select(const DataMatrix& x, const CovarianceBuilder& builder,
                        const GlassoConfig& solver, const CovarianceEstimate* full_data) {
  const std::size_t n = x.rows();
  if (n < 2) throw InvalidArgument("bic_select: need at least 2 observations");
  const CovarianceEstimate s = full_data != nullptr ? *full_data : builder(x);

  RhoSelection sel;
  sel.method = SelectionMethod::Bic;
  sel.grid = rho_grid(s);
  const double penalty = std::log(static_cast<double>(n)) / static_cast<double>(n);
  for (const double rho : sel.grid.values) {
    GlassoConfig cfg = solver;
    cfg.rho = rho;
    const PrecisionEstimate est = glasso_solve(s, cfg);
    const SparsityPattern pat = sparsity_pattern(est.theta, kDefaultZeroTol);
    double edges = 0.0;
    for (std::size_t i = 0; i < pat.dim(); ++i)
      for (std::size_t j = i; j < pat.dim(); ++j) edges += pat(i, j);
    sel.scores.push_back(neg_loglik(est.theta, s.S) + penalty * edges);
  }
  sel.chosen_index = argmin_prefer_larger_rho(sel.scores);
  sel.chosen_rho = sel.grid.values[sel.chosen_index];
  return sel;
}

}  // namespace robglasso
