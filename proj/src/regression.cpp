#include "robglasso/regression.hpp"

#include "robglasso/errors.hpp"

namespace robglasso {

RegressionResult regression_from_precision(const DataMatrix& x, std::span<const double> y,
                                           EstimatorId method, const SelectionSpec& spec,
                                           const ScaleEstimator& scale) {
  if (y.size() != x.rows()) throw InvalidArgument("regression: y length must equal n");
  const DataMatrix joint = x.with_column(y, "y");
  RegressionResult out;
  out.joint = estimate(method, joint, spec, scale);
  const SymMatrix& theta = out.joint.precision.theta;
  const std::size_t p = x.cols();
  const double tyy = theta(p, p);
  if (!(tyy > 0.0)) throw NotPositiveDefinite(p);
  out.beta.resize(p);
  for (std::size_t j = 0; j < p; ++j) out.beta[j] = -theta(j, p) / tyy;
  return out;
}

}  // namespace robglasso
