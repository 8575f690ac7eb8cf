#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "robglasso/data_matrix.hpp"
#include "robglasso/estimators.hpp"
#include "robglasso/linalg.hpp"

namespace robglasso {

enum class SchemeKind { Banded, Sparse, Dense, Diagonal };

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);

struct SchemeSpec {
  SchemeKind kind = SchemeKind::Banded;
  std::size_t p = 60;
  std::uint64_t seed = 0;  // Sparse only
};

struct Theta0 {
  SymMatrix theta;
  /// Condition number of B + delta I before standardization (Sparse only).
  double raw_condition = 0.0;
  double delta = 0.0;
  int attempts = 1;
};

SymMatrix make_theta0(const SchemeSpec& spec);
Theta0 make_theta0_detailed(const SchemeSpec& spec);

/// Rows i.i.d. N(0, theta0^{-1}).
DataMatrix sample_mvn(const SymMatrix& theta0, std::size_t n, std::uint64_t seed);

/// Replaces exactly floor(eps * n * p) cells, chosen uniformly without
/// replacement, by independent N(mean, var) draws.
DataMatrix contaminate_cellwise(const DataMatrix& x, double eps, double mean, double var,
                                std::uint64_t seed);

/// x_ij = y_ij / sqrt(tau_ij), y_i ~ N(0, theta0^{-1}),
/// tau_ij ~ Gamma(shape nu/2, rate nu/2) independently per cell.
/// `divisors`, when given, receives the tau draws.
DataMatrix sample_alternative_t(const SymMatrix& theta0, std::size_t n, double nu,
                                std::uint64_t seed, DataMatrix* divisors = nullptr);

enum class ContaminationKind { None, Cellwise, AlternativeT };

std::string_view to_string(ContaminationKind kind);
ContaminationKind parse_contamination(std::string_view name);

struct ContaminationSpec {
  ContaminationKind kind = ContaminationKind::None;
  double epsilon = 0.0;
  double spike_mean = 10.0;
  double spike_var = 0.2;
  double df = 2.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// tr(theta0^{-1} theta_hat) - log det(theta0^{-1} theta_hat) - p; +inf when
/// theta_hat is not numerically PD. Throws NotPositiveDefinite for theta0.
double kl_divergence(const SymMatrix& theta_hat, const SymMatrix& theta0);

struct ErrorRates {
  std::optional<double> fp;  // empty when theta0 has no zeros
  std::optional<double> fn;  // empty when theta0 has no nonzeros
};

/// Counted over all p^2 positions.
ErrorRates fp_fn(const SymMatrix& theta_hat, const SymMatrix& theta0,
                 double zero_tol = kDefaultZeroTol);

/// max(|l1(A) - l1(B)|, |1/lp(A) - 1/lp(B)|); +inf when either smallest
/// eigenvalue is not positive.
double breakdown_metric(const SymMatrix& a, const SymMatrix& b);

struct ExperimentConfig {
  SchemeSpec scheme;
  ContaminationSpec contamination;
  std::vector<EstimatorId> estimators;
  std::size_t n = 100;
  std::size_t replications = 20;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t folds = 5;
  GlassoConfig solver;
};

struct ReplicationRecord {
  std::size_t replication = 0;
  EstimatorId estimator = EstimatorId::GlassoGaussQn;
  std::uint64_t seed = 0;  // replication seed
  bool ok = false;
  std::string error;
  double kl = kInf;
  std::optional<double> fp;
  std::optional<double> fn;
  double rho = 0.0;
  double time_ms = 0.0;
  /// 1 / lambda_min(theta_hat) and lambda_max(S) + rho p; glasso fits only.
  std::optional<double> inv_lambda_min;
  std::optional<double> eigen_bound;
};

struct EstimatorSummary {
  EstimatorId estimator = EstimatorId::GlassoGaussQn;
  double mean_kl = kInf;
  std::optional<double> mean_fp;
  std::optional<double> mean_fn;
  double mean_time_ms = 0.0;
  std::size_t failures = 0;
};

struct EvaluationReport {
  ExperimentConfig config;
  std::vector<ReplicationRecord> records;  // replication-major
  std::vector<EstimatorSummary> summaries;

  const EstimatorSummary& summary(EstimatorId id) const;
};

EvaluationReport run_experiment(const ExperimentConfig& cfg);

struct SweepConfig {
  SchemeSpec scheme;
  std::vector<double> epsilons = {0.0, 0.1, 0.2, 0.3, 0.4};
  std::vector<EstimatorId> estimators;
  std::size_t n = 100;
  std::size_t replications = 5;
  double magnitude = 1e8;
  /// Spike variance; negative means 0.2 * magnitude.
  double spike_var = -1.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t folds = 5;
  GlassoConfig solver;
};

struct SweepRecord {
  double epsilon = 0.0;
  std::size_t replication = 0;
  EstimatorId estimator = EstimatorId::GlassoGaussQn;
  bool ok = false;
  std::string error;
  double kl = kInf;
  double d_value = kInf;
  double rho = 0.0;
  std::optional<double> inv_lambda_min;
  std::optional<double> eigen_bound;
};

struct SweepRow {
  double epsilon = 0.0;
  EstimatorId estimator = EstimatorId::GlassoGaussQn;
  double mean_kl = kInf;
  double mean_d = kInf;
  double max_d = kInf;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> records;
  std::vector<SweepRow> rows;
};

SweepResult breakdown_sweep(const SweepConfig& cfg);

/// scheme,contamination,estimator,mean_kl,mean_fp,mean_fn,mean_time_ms,M,seed
void write_report_csv(std::ostream& os, const EvaluationReport& report,
                      bool include_timing = true);
/// One JSON object per replication and estimator.
void write_report_jsonl(std::ostream& os, const EvaluationReport& report,
                        bool include_timing = true);
/// epsilon,estimator,mean_kl,mean_d,max_d,M,seed
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace robglasso
