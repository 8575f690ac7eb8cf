#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "robglasso/robust_scale.hpp"

namespace robglasso {

enum class CorrelationKind { GaussRank, Spearman, Quadrant, Pearson };

std::string_view to_string(CorrelationKind kind);

/// Midranks in [1, n]; ties share the average of the positions they occupy.
std::vector<double> ranks(std::span<const double> x);

/// Standard normal quantile, |error| <= 1e-9 on (1e-10, 1 - 1e-10).
double normal_quantile(double prob);

/// Van der Waerden scores Phi^{-1}(R(x_i) / (n + 1)).
std::vector<double> normal_scores(std::span<const double> x);
/// sum_{i=1}^{n} Phi^{-1}(i / (n + 1))^2
double normal_scores_norm(std::size_t n);

double gauss_rank_corr(std::span<const double> x, std::span<const double> y);
double spearman_corr(std::span<const double> x, std::span<const double> y);
double quadrant_corr(std::span<const double> x, std::span<const double> y);
double pearson_corr(std::span<const double> x, std::span<const double> y);
double correlation(CorrelationKind kind, std::span<const double> x,
                   std::span<const double> y);

/// Gnanadesikan-Kettenring pairwise covariance
/// (1 / 4ab) [scale(a x + b y)^2 - scale(a x - b y)^2], a = 1/scale(x),
/// b = 1/scale(y). Throws DegenerateColumn when either scale is zero.
double gk_cov(std::span<const double> x, std::span<const double> y,
              const ScaleEstimator& scale);

}  // namespace robglasso
