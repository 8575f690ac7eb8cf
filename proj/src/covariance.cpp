#include "robglasso/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robglasso/errors.hpp"
#include "robglasso/kernels.hpp"

namespace robglasso {

namespace {

constexpr double kWeiszfeldTol = 1e-8;
constexpr int kWeiszfeldMaxIter = 500;
constexpr double kWeiszfeldEps = 1e-10;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

std::vector<double> column_scales(const DataMatrix& x, const ScaleEstimator& scale) {
  std::vector<double> s(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    s[j] = scale(x.column(j));
    if (!(s[j] > 0.0)) throw DegenerateColumn(j);
  }
  return s;
}

std::size_t partner(std::size_t j, std::size_t p) { return p > 1 && j == 0 ? 1 : 0; }

// Column transform whose pairwise inner products give the correlation.
struct Transformed {
  std::vector<double> z;
  double ss = 0.0;
};

Transformed transform(CorrelationKind kind, std::span<const double> col) {
  Transformed t;
  const double n = static_cast<double>(col.size());
  switch (kind) {
    case CorrelationKind::GaussRank: {
      std::vector<double> r = ranks(col);
      double ss = 0.0;
      for (double v : r) ss += (v - 0.5 * (n + 1.0)) * (v - 0.5 * (n + 1.0));
      t.z = normal_scores(col);
      t.ss = ss;  // only used to detect an all-tied column
      break;
    }
    case CorrelationKind::Spearman: {
      t.z = ranks(col);
      for (double& v : t.z) v -= 0.5 * (n + 1.0);
      t.ss = kernels::dot(t.z, t.z);
      break;
    }
    case CorrelationKind::Quadrant: {
      const double m = median(col);
      t.z.resize(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) t.z[i] = sign(col[i] - m);
      t.ss = 1.0;
      break;
    }
    case CorrelationKind::Pearson: {
      const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
      double sxx = 0.0;
      t.z.resize(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) {
        t.z[i] = col[i] - mean;
        sxx += t.z[i] * t.z[i];
      }
      t.ss = sxx;
      break;
    }
  }
  return t;
}

}  // namespace

std::string BuilderTag::name() const {
  switch (kind) {
    case BuilderKind::CorrBased: return "corr:" + std::string(to_string(correlation));
    case BuilderKind::GkNpd: return "gk-npd";
    case BuilderKind::SpatialSign: return "spatial-sign";
    case BuilderKind::Sample: return "sample";
  }
  return "?";
}

CovarianceEstimate corr_based_cov(const DataMatrix& x, CorrelationKind kind,
                                  const ScaleEstimator& scale) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2) throw InvalidArgument("corr_based_cov: need at least 2 observations");

  CovarianceEstimate est;
  est.builder = {BuilderKind::CorrBased, kind};
  est.scales = column_scales(x, scale);

  std::vector<Transformed> cols(p);
  for (std::size_t j = 0; j < p; ++j) {
    cols[j] = transform(kind, x.column(j));
    if (cols[j].ss == 0.0) throw UndefinedCorrelation(j, partner(j, p));
  }

  const double gauss_norm =
      kind == CorrelationKind::GaussRank ? normal_scores_norm(n) : 0.0;
  const auto& k = kernels::active();
  SymMatrix s(p);
  for (std::size_t j = 0; j < p; ++j) {
    s.set(j, j, est.scales[j] * est.scales[j]);
    for (std::size_t m = j + 1; m < p; ++m) {
      const double num = k.dot(cols[j].z.data(), cols[m].z.data(), n);
      double r = 0.0;
      switch (kind) {
        case CorrelationKind::GaussRank: r = num / gauss_norm; break;
        case CorrelationKind::Quadrant: r = num / static_cast<double>(n); break;
        case CorrelationKind::Spearman:
        case CorrelationKind::Pearson:
          r = num / std::sqrt(cols[j].ss * cols[m].ss);
          break;
      }
      r = std::clamp(r, -1.0, 1.0);
      s.set(j, m, est.scales[j] * est.scales[m] * r);
    }
  }
  est.psd_certified = is_psd(s);
  est.S = std::move(s);
  return est;
}

SymMatrix gk_cov_matrix(const DataMatrix& x, const ScaleEstimator& scale) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const std::vector<double> scales = column_scales(x, scale);
  SymMatrix s(p);
  std::vector<double> plus(n), minus(n);
  for (std::size_t j = 0; j < p; ++j) {
    s.set(j, j, scales[j] * scales[j]);
    const auto xj = x.column(j);
    for (std::size_t m = j + 1; m < p; ++m) {
      const auto xm = x.column(m);
      const double a = 1.0 / scales[j];
      const double b = 1.0 / scales[m];
      for (std::size_t i = 0; i < n; ++i) {
        plus[i] = a * xj[i] + b * xm[i];
        minus[i] = a * xj[i] - b * xm[i];
      }
      const double sp = scale(plus);
      const double sm = scale(minus);
      s.set(j, m, (sp * sp - sm * sm) / (4.0 * a * b));
    }
  }
  return s;
}

SymMatrix nearest_psd(const SymMatrix& a) {
  EigenDecomposition eig = eigen_sym(a);
  if (eig.values.empty() || eig.values.back() >= 0.0) return a;
  for (double& v : eig.values) v = std::max(v, 0.0);
  return reconstruct(eig.vectors, eig.values);
}

CovarianceEstimate gk_npd_cov(const DataMatrix& x, const ScaleEstimator& scale) {
  CovarianceEstimate est;
  est.builder = {BuilderKind::GkNpd, CorrelationKind::Pearson};
  est.S = nearest_psd(gk_cov_matrix(x, scale));
  est.psd_certified = true;
  est.scales.resize(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) est.scales[j] = scale(x.column(j));
  return est;
}

namespace {

// Distances ||x_i - mu|| for every row.
std::vector<double> row_distances(const DataMatrix& x, std::span<const double> mu) {
  std::vector<double> d2(x.rows(), 0.0);
  for (std::size_t j = 0; j < x.cols(); ++j)
    kernels::accumulate_sq_dev(x.column(j), mu[j], d2);
  for (double& v : d2) v = std::sqrt(v);
  return d2;
}

double l2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

}  // namespace

SpatialMedianResult spatial_median(const DataMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 1) throw InvalidArgument("spatial_median: empty data");

  SpatialMedianResult res;
  res.center.resize(p);
  for (std::size_t j = 0; j < p; ++j) res.center[j] = median(x.column(j));

  std::vector<double> dist = row_distances(x, res.center);
  res.objective.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));

  std::vector<double> w(n), next(p);
  for (int it = 0; it < kWeiszfeldMaxIter; ++it) {
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1.0 / (dist[i] + kWeiszfeldEps);
      wsum += w[i];
    }
    double step2 = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      next[j] = kernels::dot(x.column(j), w) / wsum;
      step2 += (next[j] - res.center[j]) * (next[j] - res.center[j]);
    }
    const double scale = 1.0 + l2(res.center);
    res.center = next;
    res.iterations = it + 1;
    dist = row_distances(x, res.center);
    res.objective.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));
    if (std::sqrt(step2) <= kWeiszfeldTol * scale) {
      res.converged = true;
      break;
    }
  }
  return res;
}

CovarianceEstimate spatial_sign_cov(const DataMatrix& x, SpatialSignState* state) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2) throw InvalidArgument("spatial_sign_cov: need at least 2 observations");

  const SpatialMedianResult med = spatial_median(x);
  const std::vector<double> dist = row_distances(x, med.center);

  // Unit directions, column-major like the data.
  DataMatrix u(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto xj = x.column(j);
    auto uj = u.column(j);
    for (std::size_t i = 0; i < n; ++i)
      uj[i] = dist[i] > 0.0 ? (xj[i] - med.center[j]) / dist[i] : 0.0;
  }
  SymMatrix incons(p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t m = j; m < p; ++m)
      incons.set(j, m, kernels::dot(u.column(j), u.column(m)) / static_cast<double>(n));

  EigenDecomposition eig = eigen_sym(incons);
  std::vector<double> lambda(p);
  std::vector<double> proj(n);
  for (std::size_t c = 0; c < p; ++c) {
    std::fill(proj.begin(), proj.end(), 0.0);
    for (std::size_t j = 0; j < p; ++j) kernels::axpy(eig.vectors(j, c), x.column(j), proj);
    const double q = qn(proj);
    lambda[c] = q * q;
  }

  CovarianceEstimate est;
  est.builder = {BuilderKind::SpatialSign, CorrelationKind::Pearson};
  est.S = reconstruct(eig.vectors, lambda);
  est.psd_certified = true;
  if (state != nullptr) {
    state->spatial_median = med.center;
    state->eigvecs = eig.vectors;
    state->robust_eigvals = lambda;
    state->incons = std::move(incons);
  }
  return est;
}

CovarianceEstimate sample_cov(const DataMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2) throw InvalidArgument("sample_cov: need at least 2 observations");
  DataMatrix centered = x;
  for (std::size_t j = 0; j < p; ++j) {
    auto c = centered.column(j);
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
    for (double& v : c) v -= mean;
  }
  SymMatrix s(p);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t m = j; m < p; ++m)
      s.set(j, m, kernels::dot(centered.column(j), centered.column(m)) / denom);

  CovarianceEstimate est;
  est.builder = {BuilderKind::Sample, CorrelationKind::Pearson};
  est.S = std::move(s);
  est.psd_certified = true;
  return est;
}

}  // namespace robglasso
