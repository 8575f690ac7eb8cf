#include "robglasso/estimators.hpp"

#include <array>
#include <string>

#include "robglasso/errors.hpp"

namespace robglasso {

namespace {

constexpr std::array kBattery = {
    EstimatorId::GlassoClass,      EstimatorId::GlassoQuadQn, EstimatorId::GlassoGaussQn,
    EstimatorId::GlassoSpearmanQn, EstimatorId::GlassoNPDQn,  EstimatorId::Classic,
    EstimatorId::GlassoSpSign,
};

}  // namespace

std::string_view to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::GlassoClass: return "GlassoClass";
    case EstimatorId::GlassoQuadQn: return "GlassoQuadQn";
    case EstimatorId::GlassoGaussQn: return "GlassoGaussQn";
    case EstimatorId::GlassoSpearmanQn: return "GlassoSpearmanQn";
    case EstimatorId::GlassoNPDQn: return "GlassoNPDQn";
    case EstimatorId::Classic: return "Classic";
    case EstimatorId::GlassoSpSign: return "GlassoSpSign";
  }
  return "?";
}

std::span<const EstimatorId> all_estimators() { return kBattery; }

std::string estimator_list() {
  std::string out;
  for (EstimatorId id : kBattery) {
    if (!out.empty()) out += ", ";
    out += to_string(id);
  }
  return out;
}

EstimatorId parse_estimator(std::string_view name) {
  for (EstimatorId id : kBattery)
    if (to_string(id) == name) return id;
  throw InvalidArgument("unknown estimator '" + std::string(name) +
                        "'; valid ids: " + estimator_list());
}

CovarianceBuilder builder_for(EstimatorId id, const ScaleEstimator& scale) {
  switch (id) {
    case EstimatorId::GlassoClass:
    case EstimatorId::Classic:
      return [](const DataMatrix& x) { return sample_cov(x); };
    case EstimatorId::GlassoQuadQn:
      return [scale](const DataMatrix& x) {
        return corr_based_cov(x, CorrelationKind::Quadrant, scale);
      };
    case EstimatorId::GlassoGaussQn:
      return [scale](const DataMatrix& x) {
        return corr_based_cov(x, CorrelationKind::GaussRank, scale);
      };
    case EstimatorId::GlassoSpearmanQn:
      return [scale](const DataMatrix& x) {
        return corr_based_cov(x, CorrelationKind::Spearman, scale);
      };
    case EstimatorId::GlassoNPDQn:
      return [scale](const DataMatrix& x) { return gk_npd_cov(x, scale); };
    case EstimatorId::GlassoSpSign:
      return [](const DataMatrix& x) { return spatial_sign_cov(x); };
  }
  throw InvalidArgument("builder_for: unknown estimator");
}

EstimationResult estimate(EstimatorId id, const DataMatrix& x, const SelectionSpec& spec,
                          const ScaleEstimator& scale) {
  const CovarianceBuilder builder = builder_for(id, scale);
  EstimationResult res;
  res.id = id;
  res.covariance = builder(x);

  if (id == EstimatorId::Classic) {
    if (x.rows() <= x.cols())
      throw InvalidArgument("Classic requires more observations than variables");
    res.precision.theta = inverse_pd(res.covariance.S);
    res.precision.W = res.covariance.S;
    res.precision.rho = 0.0;
    res.precision.kkt_residual = kkt_check(res.precision.theta, res.covariance.S, 0.0);
    res.precision.converged = true;
    return res;
  }

  double rho = spec.fixed_rho;
  switch (spec.mode) {
    case SelectionSpec::Mode::CrossValidation: {
      CvOptions opts;
      opts.folds = spec.folds;
      opts.seed = spec.seed;
      opts.aggregation = spec.aggregation;
      opts.solver = spec.solver;
      res.selection = cv_select(x, builder, opts, &res.covariance);
      rho = res.selection->chosen_rho;
      break;
    }
    case SelectionSpec::Mode::Bic:
      res.selection = bic_select(x, builder, spec.solver, &res.covariance);
      rho = res.selection->chosen_rho;
      break;
    case SelectionSpec::Mode::Fixed:
      if (!(rho > 0.0)) throw InvalidArgument("fixed rho must be positive");
      break;
  }
  GlassoConfig cfg = spec.solver;
  cfg.rho = rho;
  res.precision = glasso_solve(res.covariance, cfg);
  return res;
}

}  // namespace robglasso
