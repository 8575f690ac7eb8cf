#pragma once

#include <span>
#include <string_view>

namespace robglasso {

enum class ScaleKind { Qn, Mad, SampleSd };

/// Consistency constants at the normal model.
inline constexpr double kQnConsistency = 2.21914;
inline constexpr double kMadConsistency = 1.4826;

struct ScaleEstimator {
  ScaleKind kind = ScaleKind::Qn;
  double consistency_factor = kQnConsistency;

  static ScaleEstimator qn() { return {ScaleKind::Qn, kQnConsistency}; }
  static ScaleEstimator mad() { return {ScaleKind::Mad, kMadConsistency}; }
  static ScaleEstimator sample_sd() { return {ScaleKind::SampleSd, 1.0}; }

  /// Throws InvalidArgument for a non-positive factor or a sample too small
  /// for the estimator.
  double operator()(std::span<const double> x) const;
};

ScaleKind parse_scale_kind(std::string_view name);
std::string_view to_string(ScaleKind kind);

/// Mean of the two middle order statistics for even n.
double median(std::span<const double> x);
double mad(std::span<const double> x);

/// Qn = d * k-th smallest |x_i - x_j| (i < j), h = floor(n/2) + 1,
/// k = h (h - 1) / 2, d = 2.21914. Uses selection over the pairwise
/// differences.
double qn(std::span<const double> x);
/// Same value through a full sort of the pairwise differences.
double qn_reference(std::span<const double> x);

double sample_sd(std::span<const double> x);

}  // namespace robglasso
