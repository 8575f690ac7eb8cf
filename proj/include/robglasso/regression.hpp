#pragma once

#include <span>
#include <vector>

#include "robglasso/data_matrix.hpp"
#include "robglasso/estimators.hpp"

namespace robglasso {

struct RegressionResult {
  std::vector<double> beta;  // length p
  EstimationResult joint;    // on the (p+1)-column matrix (X | y)
};

/// beta = -Theta[0:p, p] / Theta[p, p] from the joint precision of (X | y).
RegressionResult regression_from_precision(const DataMatrix& x, std::span<const double> y,
                                           EstimatorId method, const SelectionSpec& spec,
                                           const ScaleEstimator& scale = ScaleEstimator::qn());

}  // namespace robglasso
