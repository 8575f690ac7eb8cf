#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robglasso/covariance.hpp"
#include "robglasso/glasso.hpp"
#include "robglasso/selection.hpp"

namespace robglasso {

/// The estimator battery compared in the simulation study.
enum class EstimatorId {
  GlassoClass,
  GlassoQuadQn,
  GlassoGaussQn,
  GlassoSpearmanQn,
  GlassoNPDQn,
  Classic,
  GlassoSpSign,
};

std::string_view to_string(EstimatorId id);
/// Throws InvalidArgument listing the valid ids.
EstimatorId parse_estimator(std::string_view name);
std::span<const EstimatorId> all_estimators();
std::string estimator_list();

/// Covariance builder behind an estimator. Classic and GlassoClass use the
/// sample covariance; `scale` only affects the robust builders.
CovarianceBuilder builder_for(EstimatorId id,
                              const ScaleEstimator& scale = ScaleEstimator::qn());

struct SelectionSpec {
  enum class Mode { CrossValidation, Bic, Fixed };
  Mode mode = Mode::CrossValidation;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  FoldAggregation aggregation = FoldAggregation::Mean;
  double fixed_rho = 0.0;
  GlassoConfig solver;
};

struct EstimationResult {
  EstimatorId id = EstimatorId::GlassoGaussQn;
  CovarianceEstimate covariance;  // built on all rows
  PrecisionEstimate precision;
  std::optional<RhoSelection> selection;
};

/// Builds S on all rows, selects rho, and solves. Classic inverts the sample
/// covariance and requires n > p.
EstimationResult estimate(EstimatorId id, const DataMatrix& x, const SelectionSpec& spec,
                          const ScaleEstimator& scale = ScaleEstimator::qn());

}  // namespace robglasso
