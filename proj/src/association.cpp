#include "robglasso/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robglasso/errors.hpp"
#include "robglasso/kernels.hpp"

namespace robglasso {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y,
                         std::size_t min_n) {
  if (x.size() != y.size()) throw InvalidArgument("correlation: length mismatch");
  if (x.size() < min_n)
    throw InvalidArgument("correlation: need at least " + std::to_string(min_n) +
                          " observations");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw NonFiniteInput("correlation: non-finite entry");
}

double clamp_corr(double r) { return std::clamp(r, -1.0, 1.0); }

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Acklam's rational approximation to the normal quantile.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Score of midrank r among n, antisymmetric in r -> n + 1 - r exactly.
double rank_score(double r, std::size_t n) {
  const double m = static_cast<double>(n + 1);
  if (2.0 * r > m) return -normal_quantile((m - r) / m);
  return normal_quantile(r / m);
}

struct Transformed {
  std::vector<double> z;
  double ss = 0.0;  // sum of squares of z
};

Transformed centered_ranks(std::span<const double> x) {
  Transformed t{ranks(x), 0.0};
  const double centre = 0.5 * static_cast<double>(x.size() + 1);
  for (double& v : t.z) v -= centre;
  t.ss = kernels::dot(t.z, t.z);
  return t;
}

}  // namespace

std::string_view to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::GaussRank: return "gauss";
    case CorrelationKind::Spearman: return "spearman";
    case CorrelationKind::Quadrant: return "quadrant";
    case CorrelationKind::Pearson: return "pearson";
  }
  return "?";
}

std::vector<double> ranks(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) throw NonFiniteInput("ranks: non-finite entry");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    // positions i+1 .. j (1-based) share their average
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) r[order[t]] = mid;
    i = j;
  }
  return r;
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw InvalidArgument("normal_quantile: probability must lie in (0, 1)");
  double x = acklam(prob);
  // One Halley step against the exact CDF.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

std::vector<double> normal_scores(std::span<const double> x) {
  std::vector<double> s = ranks(x);
  for (double& v : s) v = rank_score(v, x.size());
  return s;
}

double normal_scores_norm(std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double z = rank_score(static_cast<double>(i), n);
    s += z * z;
  }
  return s;
}

double gauss_rank_corr(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2);
  const Transformed rx = centered_ranks(x);
  const Transformed ry = centered_ranks(y);
  if (rx.ss == 0.0 || ry.ss == 0.0) throw UndefinedCorrelation(0, 1);
  const std::vector<double> sx = normal_scores(x);
  const std::vector<double> sy = normal_scores(y);
  return clamp_corr(kernels::dot(sx, sy) / normal_scores_norm(x.size()));
}

double spearman_corr(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2);
  const Transformed rx = centered_ranks(x);
  const Transformed ry = centered_ranks(y);
  if (rx.ss == 0.0 || ry.ss == 0.0) throw UndefinedCorrelation(0, 1);
  return clamp_corr(kernels::dot(rx.z, ry.z) / std::sqrt(rx.ss * ry.ss));
}

double quadrant_corr(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 1);
  const double mx = median(x);
  const double my = median(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += sign(x[i] - mx) * sign(y[i] - my);
  return clamp_corr(s / static_cast<double>(x.size()));
}

double pearson_corr(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation(0, 1);
  return clamp_corr(sxy / std::sqrt(sxx * syy));
}

double correlation(CorrelationKind kind, std::span<const double> x,
                   std::span<const double> y) {
  switch (kind) {
    case CorrelationKind::GaussRank: return gauss_rank_corr(x, y);
    case CorrelationKind::Spearman: return spearman_corr(x, y);
    case CorrelationKind::Quadrant: return quadrant_corr(x, y);
    case CorrelationKind::Pearson: return pearson_corr(x, y);
  }
  return 0.0;
}

double gk_cov(std::span<const double> x, std::span<const double> y,
              const ScaleEstimator& scale) {
  if (x.size() != y.size()) throw InvalidArgument("gk_cov: length mismatch");
  const double sx = scale(x);
  const double sy = scale(y);
  if (!(sx > 0.0)) throw DegenerateColumn(0);
  if (!(sy > 0.0)) throw DegenerateColumn(1);
  const double a = 1.0 / sx;
  const double b = 1.0 / sy;
  std::vector<double> plus(x.size()), minus(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus[i] = a * x[i] + b * y[i];
    minus[i] = a * x[i] - b * y[i];
  }
  const double sp = scale(plus);
  const double sm = scale(minus);
  return (sp * sp - sm * sm) / (4.0 * a * b);
}

}  // namespace robglasso
