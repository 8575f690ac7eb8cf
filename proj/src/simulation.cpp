#include "robglasso/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "json.hpp"
#include "robglasso/errors.hpp"
#include "robglasso/format.hpp"
#include "robglasso/rng.hpp"

namespace robglasso {

namespace {

constexpr int kMaxSparseAttempts = 20;

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items must
// be independent; the first exception is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

enum Stream : std::uint64_t { kTheta0 = 1, kSample = 2, kContaminate = 3, kFolds = 4 };

Matrix sigma_factor(const SymMatrix& theta0) {
  const SymMatrix sigma = inverse_pd(theta0);
  CholeskyResult chol = cholesky(sigma);
  if (!chol.ok()) throw NotPositiveDefinite(chol.failed_minor);
  return std::move(*chol.factor);
}

// Draws one N(0, L L^T) row into `row`.
void draw_row(const Matrix& l, std::normal_distribution<double>& normal, Rng& rng,
              std::vector<double>& z, std::vector<double>& row) {
  const std::size_t p = l.rows();
  for (std::size_t j = 0; j < p; ++j) z[j] = normal(rng);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k <= j; ++k) s += l(j, k) * z[k];
    row[j] = s;
  }
}

double lambda_min(const SymMatrix& a) { return eigenvalues_sym(a).back(); }

}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Banded: return "banded";
    case SchemeKind::Sparse: return "sparse";
    case SchemeKind::Dense: return "dense";
    case SchemeKind::Diagonal: return "diagonal";
  }
  return "?";
}

SchemeKind parse_scheme(std::string_view name) {
  if (name == "banded") return SchemeKind::Banded;
  if (name == "sparse") return SchemeKind::Sparse;
  if (name == "dense") return SchemeKind::Dense;
  if (name == "diagonal") return SchemeKind::Diagonal;
  throw InvalidArgument("unknown scheme '" + std::string(name) +
                        "' (expected banded, sparse, dense or diagonal)");
}

std::string_view to_string(ContaminationKind kind) {
  switch (kind) {
    case ContaminationKind::None: return "none";
    case ContaminationKind::Cellwise: return "cellwise";
    case ContaminationKind::AlternativeT: return "t";
  }
  return "?";
}

ContaminationKind parse_contamination(std::string_view name) {
  if (name == "none") return ContaminationKind::None;
  if (name == "cellwise") return ContaminationKind::Cellwise;
  if (name == "t") return ContaminationKind::AlternativeT;
  throw InvalidArgument("unknown contamination '" + std::string(name) +
                        "' (expected none, cellwise or t)");
}

Theta0 make_theta0_detailed(const SchemeSpec& spec) {
  const std::size_t p = spec.p;
  if (p < 2) throw InvalidArgument("make_theta0: p must be at least 2");
  Theta0 out;
  out.theta = SymMatrix(p);
  switch (spec.kind) {
    case SchemeKind::Banded:
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j)
          out.theta.set(i, j, std::pow(0.6, static_cast<double>(j - i)));
      return out;
    case SchemeKind::Dense:
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) out.theta.set(i, j, i == j ? 1.0 : 0.5);
      return out;
    case SchemeKind::Diagonal:
      out.theta = SymMatrix::identity(p);
      return out;
    case SchemeKind::Sparse:
      break;
  }

  const double target = static_cast<double>(p);
  for (int attempt = 0; attempt < kMaxSparseAttempts; ++attempt) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    std::bernoulli_distribution edge(0.1);
    SymMatrix b(p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        if (edge(rng)) b.set(i, j, 0.5);
    const std::vector<double> ev = eigenvalues_sym(b);
    const double l1 = ev.front();
    const double lp = ev.back();
    if (!(l1 - lp > 1e-12)) continue;
    // (l1 + delta) / (lp + delta) = p
    const double delta = (l1 - target * lp) / (target - 1.0);
    if (!(delta > 0.0)) continue;
    const double cond = (l1 + delta) / (lp + delta);
    if (std::fabs(cond - target) > 0.01 * target) continue;

    out.delta = delta;
    out.raw_condition = cond;
    out.attempts = attempt + 1;
    // Standardize D^{-1/2} (B + delta I) D^{-1/2}; B has a zero diagonal so
    // D = delta I.
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j)
        out.theta.set(i, j, i == j ? 1.0 : b(i, j) / delta);
    return out;
  }
  throw Error("make_theta0: could not reach condition number p for the sparse scheme");
}

SymMatrix make_theta0(const SchemeSpec& spec) { return make_theta0_detailed(spec).theta; }

DataMatrix sample_mvn(const SymMatrix& theta0, std::size_t n, std::uint64_t seed) {
  const Matrix l = sigma_factor(theta0);
  const std::size_t p = theta0.dim();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DataMatrix x(n, p);
  std::vector<double> z(p), row(p);
  for (std::size_t i = 0; i < n; ++i) {
    draw_row(l, normal, rng, z, row);
    for (std::size_t j = 0; j < p; ++j) x(i, j) = row[j];
  }
  return x;
}

DataMatrix contaminate_cellwise(const DataMatrix& x, double eps, double mean, double var,
                                std::uint64_t seed) {
  if (!(eps >= 0.0 && eps <= 0.5))
    throw InvalidArgument("contaminate_cellwise: epsilon must lie in [0, 0.5]");
  if (!(var >= 0.0)) throw InvalidArgument("contaminate_cellwise: negative variance");
  DataMatrix out = x;
  const std::size_t cells = x.rows() * x.cols();
  const auto count = static_cast<std::size_t>(
      std::floor(eps * static_cast<double>(cells) + 1e-9));
  if (count == 0) return out;

  Rng rng(seed);
  std::vector<std::size_t> idx(cells);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cells - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::normal_distribution<double> spike(mean, std::sqrt(var));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t cell = idx[i];
    out(cell / x.cols(), cell % x.cols()) = spike(rng);
  }
  return out;
}

DataMatrix sample_alternative_t(const SymMatrix& theta0, std::size_t n, double nu,
                                std::uint64_t seed, DataMatrix* divisors) {
  if (!(nu > 0.0)) throw InvalidArgument("sample_alternative_t: nu must be positive");
  const Matrix l = sigma_factor(theta0);
  const std::size_t p = theta0.dim();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Gamma(shape nu/2, rate nu/2) has scale 2/nu.
  std::gamma_distribution<double> gamma(0.5 * nu, 2.0 / nu);
  DataMatrix x(n, p);
  if (divisors != nullptr) *divisors = DataMatrix(n, p);
  std::vector<double> z(p), row(p);
  for (std::size_t i = 0; i < n; ++i) {
    draw_row(l, normal, rng, z, row);
    for (std::size_t j = 0; j < p; ++j) {
      const double tau = gamma(rng);
      if (divisors != nullptr) (*divisors)(i, j) = tau;
      x(i, j) = row[j] / std::sqrt(tau);
    }
  }
  return x;
}

double kl_divergence(const SymMatrix& theta_hat, const SymMatrix& theta0) {
  if (theta_hat.dim() != theta0.dim()) throw InvalidArgument("kl_divergence: dim mismatch");
  const double logdet0 = log_det_pd(theta0);
  const SymMatrix sigma0 = inverse_pd(theta0);
  if (!theta_hat.all_finite()) return kInf;
  const CholeskyResult chol = cholesky(theta_hat);
  if (!chol.ok()) return kInf;
  double logdet_hat = 0.0;
  for (std::size_t j = 0; j < theta_hat.dim(); ++j)
    logdet_hat += 2.0 * std::log((*chol.factor)(j, j));
  const double kl = trace_product(sigma0, theta_hat) - (logdet_hat - logdet0) -
                    static_cast<double>(theta_hat.dim());
  return std::isfinite(kl) ? kl : kInf;
}

ErrorRates fp_fn(const SymMatrix& theta_hat, const SymMatrix& theta0, double zero_tol) {
  if (theta_hat.dim() != theta0.dim()) throw InvalidArgument("fp_fn: dim mismatch");
  std::size_t zeros = 0, nonzeros = 0, false_pos = 0, false_neg = 0;
  const std::size_t p = theta0.dim();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const bool est_nz = std::fabs(theta_hat(i, j)) > zero_tol;
      if (theta0(i, j) == 0.0) {
        ++zeros;
        false_pos += est_nz;
      } else {
        ++nonzeros;
        false_neg += !est_nz;
      }
    }
  }
  ErrorRates r;
  if (zeros > 0) r.fp = static_cast<double>(false_pos) / static_cast<double>(zeros);
  if (nonzeros > 0) r.fn = static_cast<double>(false_neg) / static_cast<double>(nonzeros);
  return r;
}

double breakdown_metric(const SymMatrix& a, const SymMatrix& b) {
  if (!a.all_finite() || !b.all_finite()) return kInf;
  const std::vector<double> ea = eigenvalues_sym(a);
  const std::vector<double> eb = eigenvalues_sym(b);
  if (!(ea.back() > 0.0) || !(eb.back() > 0.0)) return kInf;
  const double d = std::max(std::fabs(ea.front() - eb.front()),
                            std::fabs(1.0 / ea.back() - 1.0 / eb.back()));
  return std::isfinite(d) ? d : kInf;
}

const EstimatorSummary& EvaluationReport::summary(EstimatorId id) const {
  for (const auto& s : summaries)
    if (s.estimator == id) return s;
  throw InvalidArgument("report has no estimator " + std::string(to_string(id)));
}

namespace {

struct FitOutcome {
  bool ok = false;
  std::string error;
  SymMatrix theta;
  double rho = 0.0;
  double time_ms = 0.0;
  std::optional<double> inv_lambda_min;
  std::optional<double> eigen_bound;
};

FitOutcome fit(EstimatorId id, const DataMatrix& x, std::size_t folds, std::uint64_t seed,
               const GlassoConfig& solver) {
  FitOutcome out;
  SelectionSpec spec;
  spec.mode = SelectionSpec::Mode::CrossValidation;
  spec.folds = folds;
  spec.seed = seed;
  spec.solver = solver;
  const auto start = std::chrono::steady_clock::now();
  try {
    EstimationResult res = estimate(id, x, spec);
    out.theta = std::move(res.precision.theta);
    out.rho = res.precision.rho;
    out.ok = true;
    if (id != EstimatorId::Classic) {
      const double lmin = lambda_min(out.theta);
      out.inv_lambda_min = lmin > 0.0 ? 1.0 / lmin : kInf;
      out.eigen_bound = eigenvalues_sym(res.covariance.S).front() +
                        out.rho * static_cast<double>(x.cols());
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  out.time_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

DataMatrix draw_sample(const SymMatrix& theta0, const ContaminationSpec& c, std::size_t n,
                       std::uint64_t rep_seed) {
  if (c.kind == ContaminationKind::AlternativeT)
    return sample_alternative_t(theta0, n, c.df, derive_seed(rep_seed, kSample));
  DataMatrix x = sample_mvn(theta0, n, derive_seed(rep_seed, kSample));
  if (c.kind == ContaminationKind::Cellwise)
    x = contaminate_cellwise(x, c.epsilon, c.spike_mean, c.spike_var,
                             derive_seed(rep_seed, kContaminate));
  return x;
}

double finite_mean(const std::vector<double>& v) {
  if (v.empty()) return kInf;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

EvaluationReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw InvalidArgument("run_experiment: M must be at least 1");
  if (cfg.estimators.empty()) throw InvalidArgument("run_experiment: no estimators");
  EvaluationReport report;
  report.config = cfg;
  const std::size_t ne = cfg.estimators.size();
  report.records.resize(cfg.replications * ne);

  const bool fresh_theta0 = cfg.scheme.kind == SchemeKind::Sparse;
  const SymMatrix fixed_theta0 = fresh_theta0 ? SymMatrix() : make_theta0(cfg.scheme);

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, r);
    SymMatrix theta0 = fixed_theta0;
    if (fresh_theta0) {
      SchemeSpec s = cfg.scheme;
      s.seed = derive_seed(rep_seed, kTheta0);
      theta0 = make_theta0(s);
    }
    const DataMatrix x = draw_sample(theta0, cfg.contamination, cfg.n, rep_seed);
    for (std::size_t e = 0; e < ne; ++e) {
      ReplicationRecord& rec = report.records[r * ne + e];
      rec.replication = r;
      rec.estimator = cfg.estimators[e];
      rec.seed = rep_seed;
      FitOutcome f = fit(cfg.estimators[e], x, cfg.folds, derive_seed(rep_seed, kFolds),
                         cfg.solver);
      rec.ok = f.ok;
      rec.error = f.error;
      rec.time_ms = f.time_ms;
      rec.rho = f.rho;
      rec.inv_lambda_min = f.inv_lambda_min;
      rec.eigen_bound = f.eigen_bound;
      if (f.ok) {
        rec.kl = kl_divergence(f.theta, theta0);
        const ErrorRates rates = fp_fn(f.theta, theta0);
        rec.fp = rates.fp;
        rec.fn = rates.fn;
      }
    }
  });

  for (std::size_t e = 0; e < ne; ++e) {
    EstimatorSummary s;
    s.estimator = cfg.estimators[e];
    std::vector<double> kl, fp, fn, tm;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const ReplicationRecord& rec = report.records[r * ne + e];
      if (!rec.ok) {
        ++s.failures;
        continue;
      }
      kl.push_back(rec.kl);
      if (rec.fp) fp.push_back(*rec.fp);
      if (rec.fn) fn.push_back(*rec.fn);
      tm.push_back(rec.time_ms);
    }
    s.mean_kl = finite_mean(kl);
    if (!fp.empty()) s.mean_fp = finite_mean(fp);
    if (!fn.empty()) s.mean_fn = finite_mean(fn);
    s.mean_time_ms = tm.empty() ? 0.0 : finite_mean(tm);
    report.summaries.push_back(s);
  }
  return report;
}

SweepResult breakdown_sweep(const SweepConfig& cfg) {
  if (cfg.replications < 1) throw InvalidArgument("breakdown_sweep: M must be at least 1");
  for (double eps : cfg.epsilons)
    if (!(eps >= 0.0 && eps < 0.5))
      throw InvalidArgument("breakdown_sweep: epsilon values must lie in [0, 0.5)");
  SweepResult out;
  out.config = cfg;
  const std::size_t ne = cfg.estimators.size();
  const std::size_t nk = cfg.epsilons.size();
  const double spike_var = cfg.spike_var < 0.0 ? 0.2 * cfg.magnitude : cfg.spike_var;
  out.records.resize(cfg.replications * nk * ne);

  const bool fresh_theta0 = cfg.scheme.kind == SchemeKind::Sparse;
  const SymMatrix fixed_theta0 = fresh_theta0 ? SymMatrix() : make_theta0(cfg.scheme);

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, r);
    SymMatrix theta0 = fixed_theta0;
    if (fresh_theta0) {
      SchemeSpec s = cfg.scheme;
      s.seed = derive_seed(rep_seed, kTheta0);
      theta0 = make_theta0(s);
    }
    const DataMatrix clean = sample_mvn(theta0, cfg.n, derive_seed(rep_seed, kSample));
    const std::uint64_t fold_seed = derive_seed(rep_seed, kFolds);
    std::vector<FitOutcome> clean_fit(ne);
    for (std::size_t e = 0; e < ne; ++e)
      clean_fit[e] = fit(cfg.estimators[e], clean, cfg.folds, fold_seed, cfg.solver);

    for (std::size_t k = 0; k < nk; ++k) {
      const double eps = cfg.epsilons[k];
      const DataMatrix dirty =
          eps == 0.0 ? clean
                     : contaminate_cellwise(clean, eps, cfg.magnitude, spike_var,
                                            derive_seed(rep_seed, kContaminate));
      for (std::size_t e = 0; e < ne; ++e) {
        SweepRecord& rec = out.records[(r * nk + k) * ne + e];
        rec.epsilon = eps;
        rec.replication = r;
        rec.estimator = cfg.estimators[e];
        const FitOutcome f = eps == 0.0 ? clean_fit[e]
                                        : fit(cfg.estimators[e], dirty, cfg.folds,
                                              fold_seed, cfg.solver);
        rec.ok = f.ok && clean_fit[e].ok;
        rec.error = !f.ok ? f.error : clean_fit[e].error;
        rec.rho = f.rho;
        rec.inv_lambda_min = f.inv_lambda_min;
        rec.eigen_bound = f.eigen_bound;
        if (rec.ok) {
          rec.kl = kl_divergence(f.theta, theta0);
          rec.d_value = breakdown_metric(clean_fit[e].theta, f.theta);
        }
      }
    }
  });

  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t e = 0; e < ne; ++e) {
      SweepRow row;
      row.epsilon = cfg.epsilons[k];
      row.estimator = cfg.estimators[e];
      std::vector<double> kl, d;
      for (std::size_t r = 0; r < cfg.replications; ++r) {
        const SweepRecord& rec = out.records[(r * nk + k) * ne + e];
        kl.push_back(rec.kl);
        d.push_back(rec.d_value);
      }
      row.mean_kl = finite_mean(kl);
      row.mean_d = finite_mean(d);
      row.max_d = *std::max_element(d.begin(), d.end());
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_report_csv(std::ostream& os, const EvaluationReport& report,
                      bool include_timing) {
  const auto& c = report.config;
  os << "scheme,contamination,estimator,mean_kl,mean_fp,mean_fn";
  if (include_timing) os << ",mean_time_ms";
  os << ",M,seed\n";
  std::string contamination(to_string(c.contamination.kind));
  if (c.contamination.kind == ContaminationKind::Cellwise)
    contamination += ":" + format_double(c.contamination.epsilon);
  else if (c.contamination.kind == ContaminationKind::AlternativeT)
    contamination += ":" + format_double(c.contamination.df);
  for (const auto& s : report.summaries) {
    os << to_string(c.scheme.kind) << ',' << contamination << ',' << to_string(s.estimator)
       << ',' << format_double(s.mean_kl) << ',' << format_optional(s.mean_fp) << ','
       << format_optional(s.mean_fn);
    if (include_timing) os << ',' << format_double(s.mean_time_ms);
    os << ',' << c.replications << ',' << c.seed << '\n';
  }
}

void write_report_jsonl(std::ostream& os, const EvaluationReport& report,
                        bool include_timing) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  for (const auto& rec : report.records) {
    nlohmann::json j;
    j["replication"] = rec.replication;
    j["estimator"] = std::string(to_string(rec.estimator));
    j["seed"] = rec.seed;
    j["ok"] = rec.ok;
    if (!rec.ok) j["error"] = rec.error;
    j["kl"] = opt(rec.kl);
    j["fp"] = opt(rec.fp);
    j["fn"] = opt(rec.fn);
    j["rho"] = rec.rho;
    j["inv_lambda_min"] = opt(rec.inv_lambda_min);
    j["eigen_bound"] = opt(rec.eigen_bound);
    if (include_timing) j["time_ms"] = rec.time_ms;
    os << j.dump() << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "epsilon,estimator,mean_kl,mean_d,max_d,M,seed\n";
  for (const auto& row : sweep.rows) {
    os << format_double(row.epsilon) << ',' << to_string(row.estimator) << ','
       << format_double(row.mean_kl) << ',' << format_double(row.mean_d) << ','
       << format_double(row.max_d) << ',' << sweep.config.replications << ','
       << sweep.config.seed << '\n';
  }
}

}  // namespace robglasso
