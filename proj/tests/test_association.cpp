#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "robglasso/association.hpp"
#include "robglasso/errors.hpp"

using namespace robglasso;

namespace {

struct Pair {
  std::vector<double> x, y;
};

Pair bivariate_normal(std::size_t n, double rho, Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Pair p;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = d(rng);
    const double b = d(rng);
    p.x.push_back(a);
    p.y.push_back(rho * a + std::sqrt(1.0 - rho * rho) * b);
  }
  return p;
}

constexpr CorrelationKind kKinds[] = {CorrelationKind::GaussRank, CorrelationKind::Spearman,
                                      CorrelationKind::Quadrant, CorrelationKind::Pearson};

}  // namespace

TEST_SUITE("association") {
  TEST_CASE("ranks") {
    CHECK(ranks(std::vector<double>{10, 20, 30}) == std::vector<double>{1, 2, 3});
    CHECK(ranks(std::vector<double>{5, 5, 1}) == std::vector<double>{2.5, 2.5, 1});
    CHECK(ranks(std::vector<double>{7}) == std::vector<double>{1});
    Rng rng(47);
    auto x = testing::normal_vector(101, rng);
    for (double& v : x) v = std::round(v * 3.0);
    const auto r = ranks(x);
    double sum = 0.0;
    for (double v : r) {
      CHECK(v >= 1.0);
      CHECK(v <= 101.0);
      sum += v;
    }
    CHECK(sum == 101.0 * 102.0 / 2.0);
  }

  TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.75) == doctest::Approx(0.6744897501960817).epsilon(1e-12));
    CHECK(normal_quantile(0.25) == doctest::Approx(-normal_quantile(0.75)).epsilon(1e-14));
    for (double p = 1e-10; p < 1.0; p *= 3.7) {
      const double q = normal_quantile(p);
      CHECK(0.5 * std::erfc(-q / std::sqrt(2.0)) == doctest::Approx(p).epsilon(1e-9));
    }
  }

  TEST_CASE("gauss_rank_corr") {
    const std::vector<double> x{1, 2, 3}, y{3, 1, 2};
    CHECK(std::fabs(gauss_rank_corr(x, y) + 0.5) <= 1e-12);
    Rng rng(53);
    const auto v = testing::normal_vector(50, rng);
    std::vector<double> neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    CHECK(gauss_rank_corr(v, v) == 1.0);
    CHECK(gauss_rank_corr(v, neg) == -1.0);
    CHECK_THROWS_AS(gauss_rank_corr(v, std::vector<double>(50, 2.0)), UndefinedCorrelation);
  }

  TEST_CASE("spearman_corr") {
    const std::vector<double> x{1, 2, 3}, y{3, 1, 2};
    CHECK(spearman_corr(x, y) == -0.5);
    Rng rng(59);
    const auto v = testing::normal_vector(40, rng);
    const auto w = testing::normal_vector(40, rng);
    std::vector<double> ev(v.size()), cw(w.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      ev[i] = std::exp(v[i]);
      cw[i] = w[i] * w[i] * w[i] + 2.0;
    }
    CHECK(spearman_corr(v, ev) == 1.0);
    CHECK(spearman_corr(v, w) == spearman_corr(ev, cw));
  }

  TEST_CASE("quadrant_corr") {
    const std::vector<double> x{1, 2, 3, 4, 5}, y{5, 4, 3, 2, 1};
    CHECK(quadrant_corr(x, y) == -0.8);
    CHECK(quadrant_corr(x, x) == 1.0 - 1.0 / 5.0);
    CHECK(quadrant_corr(x, std::vector<double>(5, 1.0)) == 0.0);
    Rng rng(61);
    const auto v = testing::normal_vector(41, rng);
    const auto w = testing::normal_vector(41, rng);
    std::vector<double> tv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) tv[i] = std::atan(v[i]);
    CHECK(quadrant_corr(v, w) == quadrant_corr(tv, w));
  }

  TEST_CASE("pearson_corr") {
    const std::vector<double> x{1, 2, 3};
    CHECK(pearson_corr(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson_corr(x, std::vector<double>{2, 1, 3}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pearson_corr(x, std::vector<double>{-1, 3, 7}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pearson_corr(x, std::vector<double>{1, 1, 1}), UndefinedCorrelation);
  }

  TEST_CASE("range and symmetry") {
    Rng rng(67);
    for (int t = 0; t < 50; ++t) {
      const auto p = bivariate_normal(3 + t, 0.3, rng);
      for (auto kind : kKinds) {
        const double r = correlation(kind, p.x, p.y);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        CHECK(r == correlation(kind, p.y, p.x));
      }
    }
  }

  TEST_CASE("consistency at the normal model") {
    Rng rng(71);
    for (double rho : {0.0, 0.5, 0.9}) {
      const auto p = bivariate_normal(5000, rho, rng);
      CHECK(std::fabs(gauss_rank_corr(p.x, p.y) - rho) <= 0.05);
      CHECK(std::fabs(spearman_corr(p.x, p.y) - rho) <= 0.05);
    }
  }

  TEST_CASE("cellwise robustness") {
    Rng rng(73);
    auto p = bivariate_normal(2000, 0.5, rng);
    const double g0 = gauss_rank_corr(p.x, p.y);
    const double s0 = spearman_corr(p.x, p.y);
    const double q0 = quadrant_corr(p.x, p.y);
    for (std::size_t i = 0; i < p.x.size(); i += 10) p.x[i] = 1e6;
    CHECK(std::fabs(gauss_rank_corr(p.x, p.y) - g0) <= 0.35);
    CHECK(std::fabs(spearman_corr(p.x, p.y) - s0) <= 0.35);
    CHECK(std::fabs(quadrant_corr(p.x, p.y) - q0) <= 0.35);
    const double r = pearson_corr(p.x, p.y);
    CHECK((std::fabs(r) <= 0.1 || std::fabs(r) >= 0.9));
  }

  TEST_CASE("gk_cov") {
    Rng rng(79);
    const auto x = testing::normal_vector(60, rng);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    const double q = qn(x);
    CHECK(gk_cov(x, x, ScaleEstimator::qn()) == doctest::Approx(q * q).epsilon(1e-12));
    CHECK(gk_cov(x, neg, ScaleEstimator::qn()) == doctest::Approx(-q * q).epsilon(1e-12));
    const auto p = bivariate_normal(2000, 0.5, rng);
    const double c = gk_cov(p.x, p.y, ScaleEstimator::qn()) / (qn(p.x) * qn(p.y));
    CHECK(c >= 0.4);
    CHECK(c <= 0.6);
    CHECK_THROWS_AS(gk_cov(x, std::vector<double>(60, 1.0), ScaleEstimator::qn()),
                    DegenerateColumn);
  }
}
