#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "robglasso/covariance.hpp"
#include "robglasso/data_matrix.hpp"
#include "robglasso/glasso.hpp"

namespace robglasso {

inline constexpr std::size_t kRhoGridSize = 10;
inline constexpr double kRhoFloor = 1e-4;

struct RhoGrid {
  std::vector<double> values;  // descending, values.front() == rho_max
  double rho_max = 0.0;
  double rho_min = 0.0;
};

/// rho_max = max(S - I) - min(S - I) (floored at 1e-4), rho_min = rho_max/10,
/// ten log-equispaced values in between.
RhoGrid rho_grid(const CovarianceEstimate& s);
RhoGrid rho_grid(const SymMatrix& s);

enum class SelectionMethod { CrossValidation, Bic };
enum class FoldAggregation { Mean, Median };

struct RhoSelection {
  RhoGrid grid;
  std::vector<double> scores;  // one per grid value
  double chosen_rho = 0.0;
  std::size_t chosen_index = 0;
  SelectionMethod method = SelectionMethod::CrossValidation;
  std::size_t folds = 0;  // CV only
};

struct CvOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  FoldAggregation aggregation = FoldAggregation::Mean;
  GlassoConfig solver;  // rho is overwritten per grid value
};

/// Index of the smallest score; ties resolve to the larger rho (earlier
/// position in the descending grid).
std::size_t argmin_prefer_larger_rho(const std::vector<double>& scores);

/// Row index blocks: seeded uniform shuffle cut into K contiguous blocks of
/// near-equal size.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t folds,
                                                 std::uint64_t seed);

/// -log det Theta + tr(S Theta)
double neg_loglik(const SymMatrix& theta, const SymMatrix& s);

/// K-fold cross-validation over the grid built from the full-data estimate.
/// Each fold's test score uses the same builder on the held-out rows.
/// `full_data`, when given, must equal builder(x).
RhoSelection cv_select(const DataMatrix& x, const CovarianceBuilder& builder,
                       const CvOptions& opts,
                       const CovarianceEstimate* full_data = nullptr);

/// BIC(rho) = -log det Theta + tr(Theta S) + (log n / n) #{i <= j: theta_ij != 0}.
RhoSelection bic_select(const DataMatrix& x, const CovarianceBuilder& builder,
                        const GlassoConfig& solver = {},
                        const CovarianceEstimate* full_data = nullptr);

}  // namespace robglasso
