#pragma once

#include <functional>
#include <string>
#include <vector>

#include "robglasso/association.hpp"
#include "robglasso/data_matrix.hpp"
#include "robglasso/linalg.hpp"
#include "robglasso/robust_scale.hpp"

namespace robglasso {

enum class BuilderKind { CorrBased, GkNpd, SpatialSign, Sample };

struct BuilderTag {
  BuilderKind kind = BuilderKind::Sample;
  CorrelationKind correlation = CorrelationKind::Pearson;  // CorrBased only

  std::string name() const;
};

struct CovarianceEstimate {
  SymMatrix S;
  BuilderTag builder;
  bool psd_certified = false;
  /// Marginal scales used (empty for builders that have none).
  std::vector<double> scales;
};

/// Maps a data matrix to a covariance estimate. Folds in cross-validation
/// are built with the same handle.
using CovarianceBuilder = std::function<CovarianceEstimate(const DataMatrix&)>;

/// s_jk = scale(x_j) scale(x_k) r(x_j, x_k), diagonal scale(x_j)^2.
CovarianceEstimate corr_based_cov(const DataMatrix& x, CorrelationKind kind,
                                  const ScaleEstimator& scale);

/// Pairwise GK covariances, diagonal scale(x_j)^2. Not necessarily PSD.
SymMatrix gk_cov_matrix(const DataMatrix& x, const ScaleEstimator& scale);

/// Frobenius-nearest PSD matrix by eigenvalue clipping.
SymMatrix nearest_psd(const SymMatrix& a);

CovarianceEstimate gk_npd_cov(const DataMatrix& x, const ScaleEstimator& scale);

struct SpatialMedianResult {
  std::vector<double> center;
  int iterations = 0;
  bool converged = false;
  /// sum_i ||x_i - mu_t|| for the initial point and after every update.
  std::vector<double> objective;
};

/// Weiszfeld iteration from the coordinatewise median.
SpatialMedianResult spatial_median(const DataMatrix& x);

struct SpatialSignState {
  std::vector<double> spatial_median;
  Matrix eigvecs;
  std::vector<double> robust_eigvals;
  SymMatrix incons;  // (1/n) sum U(x_i - mu) U(x_i - mu)^T
};

/// Spatial sign covariance with eigenvalues recalibrated by Qn of the
/// projected data.
CovarianceEstimate spatial_sign_cov(const DataMatrix& x,
                                    SpatialSignState* state = nullptr);

/// Classical sample covariance with (n - 1) denominator.
CovarianceEstimate sample_cov(const DataMatrix& x);

}  // namespace robglasso
