#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "robglasso/association.hpp"
#include "robglasso/covariance.hpp"
#include "robglasso/glasso.hpp"
#include "robglasso/rng.hpp"
#include "robglasso/robust_scale.hpp"
#include "robglasso/selection.hpp"
#include "robglasso/simulation.hpp"

using namespace robglasso;

namespace {

constexpr std::uint64_t kMasterSeed = 20240101;
constexpr std::size_t kP = 60;
constexpr std::size_t kN = 100;

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
  std::printf("criterion %2d: %s  %s  (%.1fs)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class F>
void timed(int id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, pass, detail, s);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

DataMatrix gaussian(std::size_t n, std::size_t p, Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  DataMatrix x(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = d(rng);
  return x;
}

SymMatrix random_psd(std::size_t p, std::size_t k, Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix g(p, k);
  for (double& v : g.data()) v = d(rng);
  SymMatrix a(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += g(i, t) * g(j, t);
      a.set(i, j, s / static_cast<double>(k));
    }
  return a;
}

ExperimentConfig banded(ContaminationSpec c, std::vector<EstimatorId> ids) {
  ExperimentConfig cfg;
  cfg.scheme = {SchemeKind::Banded, kP, 0};
  cfg.contamination = c;
  cfg.estimators = std::move(ids);
  cfg.n = kN;
  cfg.replications = 20;
  cfg.seed = kMasterSeed;
  return cfg;
}

ContaminationSpec cellwise(double eps) {
  ContaminationSpec c;
  c.kind = ContaminationKind::Cellwise;
  c.epsilon = eps;
  return c;
}

struct BoundTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = -kInf;

  void add(const std::optional<double>& inv_min, const std::optional<double>& bound) {
    if (!inv_min || !bound) return;
    ++checked;
    const double gap = *inv_min - (*bound + 1e-6);
    worst = std::max(worst, gap);
    if (gap > 0.0) ++violations;
  }
  void add(const EvaluationReport& r) {
    for (const auto& rec : r.records)
      if (rec.ok) add(rec.inv_lambda_min, rec.eigen_bound);
  }
  void add(const SweepResult& r) {
    for (const auto& rec : r.records)
      if (rec.ok) add(rec.inv_lambda_min, rec.eigen_bound);
  }
};

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::vector<const char*> argv{"robglasso"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

}  // namespace

int main() {
  BoundTally bounds;

  timed(1, [](std::string& detail) {
    Rng rng(derive_seed(kMasterSeed, 101));
    std::size_t ok = 0;
    double worst_kkt = 0.0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t p = 2 + (t * 13) % 49;
      const std::size_t rank = t < 10 ? std::max<std::size_t>(1, p / 2) : p + 10;
      const SymMatrix s = random_psd(p, rank, rng);
      GlassoConfig cfg;
      cfg.rho = rho_grid(s).values[t % kRhoGridSize];
      const auto est = glasso_solve(s, cfg);
      const double kkt = kkt_check(est.theta, s, cfg.rho);
      worst_kkt = std::max(worst_kkt, kkt);
      if (cholesky(est.theta).ok() && kkt <= 1e-4) ++ok;
    }
    detail = fmt("%.0f/50 PD with KKT <= 1e-4, worst KKT %.2e", double(ok), worst_kkt);
    return ok == 50;
  });

  timed(2, [](std::string& detail) {
    Rng rng(derive_seed(kMasterSeed, 102));
    const SymMatrix s = sample_cov(gaussian(200, 10, rng)).S;
    const SymMatrix inv = inverse_pd(s);
    GlassoConfig cfg;
    cfg.rho = 1e-8;
    const double rel = frobenius_distance(glasso_solve(s, cfg).theta, inv) / frobenius(inv);
    detail = fmt("relative error %.2e (<= 1e-4)", rel);
    return rel <= 1e-4;
  });

  timed(3, [](std::string& detail) {
    Rng rng(derive_seed(kMasterSeed, 103));
    std::uniform_real_distribution<double> u(0.1, 5.0);
    double worst_entry = 0.0, worst_kkt = 0.0;
    for (int t = 0; t < 10; ++t) {
      std::vector<double> d(3 + t);
      for (double& v : d) v = u(rng);
      const SymMatrix s = SymMatrix::diagonal(d);
      for (double rho : rho_grid(s).values) {
        GlassoConfig cfg;
        cfg.rho = rho;
        const auto est = glasso_solve(s, cfg);
        for (std::size_t j = 0; j < d.size(); ++j)
          for (std::size_t k = 0; k < d.size(); ++k) {
            const double expect = j == k ? 1.0 / (d[j] + rho) : 0.0;
            worst_entry = std::max(worst_entry, std::fabs(est.theta(j, k) - expect));
          }
        worst_kkt = std::max(worst_kkt, est.kkt_residual);
      }
    }
    detail = fmt("max entry error %.2e (<= 1e-8), max KKT %.2e (<= 1e-10)", worst_entry, worst_kkt);
    return worst_entry <= 1e-8 && worst_kkt <= 1e-10;
  });

  timed(4, [&](std::string& detail) {
    const auto r = run_experiment(banded({}, {EstimatorId::GlassoClass, EstimatorId::GlassoGaussQn,
                                              EstimatorId::GlassoQuadQn}));
    bounds.add(r);
    const double c = r.summary(EstimatorId::GlassoClass).mean_kl;
    const double g = r.summary(EstimatorId::GlassoGaussQn).mean_kl;
    const double q = r.summary(EstimatorId::GlassoQuadQn).mean_kl;
    detail = fmt("KL Class %.3f in [6,12], GaussQn %.3f <= %.3f, QuadQn %.3f > GaussQn", c, g, 1.3 * c, q);
    return c >= 6.0 && c <= 12.0 && g <= 1.3 * c && q > g;
  });

  double gauss5 = kInf, spearman5 = kInf;
  timed(5, [&](std::string& detail) {
    const auto r = run_experiment(banded(cellwise(0.1), {EstimatorId::GlassoClass, EstimatorId::GlassoGaussQn,
                                                         EstimatorId::GlassoSpearmanQn,
                                                         EstimatorId::GlassoNPDQn}));
    bounds.add(r);
    const double c = r.summary(EstimatorId::GlassoClass).mean_kl;
    gauss5 = r.summary(EstimatorId::GlassoGaussQn).mean_kl;
    spearman5 = r.summary(EstimatorId::GlassoSpearmanQn).mean_kl;
    const double npd = r.summary(EstimatorId::GlassoNPDQn).mean_kl;
    detail = fmt("KL Class %.3f, GaussQn %.3f <= %.3f, NPDQn %.3f > GaussQn", c, gauss5, 0.5 * c, npd);
    return gauss5 <= 0.5 * c && gauss5 < npd;
  });

  timed(6, [&](std::string& detail) {
    bool pass = true;
    std::string parts;
    for (double eps : {0.0, 0.05}) {
      ExperimentConfig cfg = banded(eps > 0 ? cellwise(eps) : ContaminationSpec{},
                                    {all_estimators().begin(), all_estimators().end()});
      cfg.scheme.kind = SchemeKind::Diagonal;
      cfg.replications = 5;
      const auto r = run_experiment(cfg);
      bounds.add(r);
      double worst = 0.0;
      for (const auto& rec : r.records) {
        if (!rec.ok) {
          if (rec.estimator != EstimatorId::Classic) pass = false;
          continue;
        }
        if (rec.fn) worst = std::max(worst, *rec.fn);
        if (!rec.fn || *rec.fn != 0.0) pass = false;
      }
      parts += fmt("eps %.2f max FN %.3f; ", eps, worst);
    }
    detail = parts + "expect FN = 0";
    return pass;
  });

  timed(7, [&](std::string& detail) {
    const double diff = std::fabs(spearman5 - gauss5);
    detail = fmt("|SpearmanQn %.3f - GaussQn %.3f| = %.3f <= %.3f", spearman5, gauss5, diff, 0.25 * gauss5);
    return std::isfinite(diff) && diff <= 0.25 * gauss5;
  });

  timed(8, [&](std::string& detail) {
    SweepConfig cfg;
    cfg.scheme = {SchemeKind::Banded, kP, 0};
    cfg.estimators = {EstimatorId::GlassoClass, EstimatorId::GlassoQuadQn, EstimatorId::GlassoGaussQn,
                      EstimatorId::GlassoSpearmanQn, EstimatorId::GlassoNPDQn};
    cfg.n = kN;
    cfg.replications = 5;
    cfg.magnitude = 1e8;
    cfg.seed = kMasterSeed;
    const SweepResult sw = breakdown_sweep(cfg);
    bounds.add(sw);

    auto row = [&](double eps, EstimatorId id) -> const SweepRow& {
      for (const auto& r : sw.rows)
        if (std::fabs(r.epsilon - eps) < 1e-12 && r.estimator == id) return r;
      throw std::runtime_error("missing sweep row");
    };
    auto record = [&](double eps, std::size_t rep, EstimatorId id) -> const SweepRecord& {
      for (const auto& r : sw.records)
        if (std::fabs(r.epsilon - eps) < 1e-12 && r.replication == rep && r.estimator == id) return r;
      throw std::runtime_error("missing sweep record");
    };

    bool gauss_bounded = true;
    double gauss_max = 0.0;
    for (double eps : cfg.epsilons) {
      const double d = row(eps, EstimatorId::GlassoGaussQn).max_d;
      gauss_max = std::max(gauss_max, d);
      if (!std::isfinite(d) || d > 1e6) gauss_bounded = false;
    }
    std::size_t contrast = 0;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      const double dn = record(0.3, rep, EstimatorId::GlassoNPDQn).d_value;
      const double dg = record(0.3, rep, EstimatorId::GlassoGaussQn).d_value;
      if (dn > 10.0 * dg) ++contrast;
    }
    bool class_worst = true;
    for (double eps : cfg.epsilons) {
      if (eps < 0.1) continue;
      const double c = row(eps, EstimatorId::GlassoClass).mean_kl;
      for (EstimatorId id : cfg.estimators)
        if (id != EstimatorId::GlassoClass && !(c > row(eps, id).mean_kl)) class_worst = false;
    }
    const double frac = static_cast<double>(contrast) / static_cast<double>(cfg.replications);
    detail = fmt("GaussQn max D %.3g (<= 1e6), NPD > 10x GaussQn at 0.3 on %.0f%% (>= 70%%), Class KL worst %.0f",
                 gauss_max, 100.0 * frac, class_worst ? 1.0 : 0.0);
    return gauss_bounded && frac >= 0.7 && class_worst;
  });

  timed(9, [&](std::string& detail) {
    detail = fmt("%.0f instances, %.0f violations, worst margin %.3g", double(bounds.checked),
                 double(bounds.violations), bounds.worst);
    return bounds.checked > 0 && bounds.violations == 0;
  });

  timed(10, [](std::string& detail) {
    const SymMatrix theta0 = make_theta0({SchemeKind::Banded, 20, 0});
    const CorrelationKind kinds[] = {CorrelationKind::GaussRank, CorrelationKind::Spearman,
                                     CorrelationKind::Quadrant};
    std::size_t violations = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      const std::uint64_t seed = derive_seed(kMasterSeed, 1000 + t);
      const DataMatrix clean = sample_mvn(theta0, 60, seed);
      const double eps = 0.05 * static_cast<double>(t % 9);
      const double mag = t % 2 ? 10.0 : 1e8;
      const DataMatrix x = contaminate_cellwise(clean, eps, mag, 0.2 * mag, derive_seed(seed, 3));
      const auto est = corr_based_cov(x, kinds[t % 3], ScaleEstimator::qn());
      double max_q2 = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) max_q2 = std::max(max_q2, std::pow(qn(x.column(j)), 2));
      if (eigenvalues_sym(est.S).front() > static_cast<double>(x.cols()) * max_q2 + 1e-6) ++violations;
    }
    detail = fmt("%.0f violations in 100 draws", double(violations));
    return violations == 0;
  });

  timed(11, [](std::string& detail) {
    const std::vector<double> q{1, 2, 4, 8};
    const std::vector<double> a{1, 2, 3}, b{3, 1, 2};
    const std::vector<double> up{1, 2, 3, 4, 5}, down{5, 4, 3, 2, 1};
    const double m[] = {1, 2, 2, 1};
    const SymMatrix npd = nearest_psd(SymMatrix::from_rows(2, m));
    double npd_err = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) npd_err = std::max(npd_err, std::fabs(npd(j, k) - 1.5));
    const double two[] = {2, 2};
    const double kl = kl_divergence(SymMatrix::diagonal(two), SymMatrix::identity(2));
    const double qv = qn(q);
    const bool pass = std::fabs(qv - 6.65742) <= 1e-5 && spearman_corr(a, b) == -0.5 &&
                      quadrant_corr(up, down) == -0.8 && std::fabs(gauss_rank_corr(a, b) + 0.5) <= 1e-12 &&
                      npd_err <= 1e-10 && std::fabs(kl - 0.61371) <= 1e-5;
    detail = fmt("Qn %.6f, KL %.6f, NPD err %.1e", qv, kl, npd_err);
    return pass;
  });

  timed(12, [](std::string& detail) {
    const std::vector<std::string> base{"simulate", "--scheme", "sparse", "--p", "15", "--n", "60",
                                        "--M", "4", "--epsilon", "0.05", "--seed", "77", "--no-timing"};
    int c1 = 0, c3 = 0;
    auto a1 = base, a3 = base;
    a1.insert(a1.end(), {"--threads", "1"});
    a3.insert(a3.end(), {"--threads", "3"});
    const std::string out1 = run_cli(a1, c1);
    const std::string out3 = run_cli(a3, c3);
    detail = fmt("exit codes %.0f/%.0f, %.0f bytes", c1, c3, double(out1.size()));
    return c1 == 0 && c3 == 0 && !out1.empty() && out1 == out3;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
