#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "robglasso/errors.hpp"
#include "robglasso/robust_scale.hpp"

using namespace robglasso;

namespace {

// Straight from the definition: sort every pairwise distance.
double qn_oracle(const std::vector<double>& x) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) d.push_back(std::fabs(x[i] - x[j]));
  std::sort(d.begin(), d.end());
  const std::size_t h = x.size() / 2 + 1;
  return 2.21914 * d[h * (h - 1) / 2 - 1];
}

}  // namespace

TEST_SUITE("robust_scale") {
  TEST_CASE("median") {
    CHECK(median(std::vector<double>{1, 2, 3}) == 2.0);
    CHECK(median(std::vector<double>{1, 2, 3, 10}) == 2.5);
    CHECK(median(std::vector<double>{5}) == 5.0);
    CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
    CHECK_THROWS_AS(median(std::vector<double>{}), InvalidArgument);
  }

  TEST_CASE("mad") {
    CHECK(mad(std::vector<double>{1, 1, 1, 1}) == 0.0);
    CHECK(mad(std::vector<double>{1, 2, 3, 4, 5}) == doctest::Approx(1.4826).epsilon(1e-15));
    CHECK(mad(std::vector<double>{0, 0, 0, 100}) == 0.0);
    CHECK_THROWS_AS(mad(std::vector<double>{}), InvalidArgument);
  }

  TEST_CASE("qn examples") {
    CHECK(qn(std::vector<double>{4, 4, 4, 4, 4}) == 0.0);
    CHECK(qn(std::vector<double>{1, 2, 4, 8}) == doctest::Approx(6.65742).epsilon(1e-12));
    CHECK(qn_reference(std::vector<double>{1, 2, 4, 8}) ==
          doctest::Approx(6.65742).epsilon(1e-12));
    CHECK_THROWS_AS(qn(std::vector<double>{1}), InvalidArgument);
  }

  TEST_CASE("qn fast path agrees with the sorted reference") {
    Rng rng(31);
    std::uniform_int_distribution<std::size_t> len(2, 500);
    for (int t = 0; t < 100; ++t) {
      auto x = testing::normal_vector(len(rng), rng, 1.0 + t);
      if (t % 4 == 0)
        for (double& v : x) v = std::round(v * 2.0);  // ties
      const double ref = qn_reference(x);
      CHECK(std::fabs(qn(x) - ref) <= 1e-12 * std::max(1.0, ref));
      CHECK(std::fabs(ref - qn_oracle(x)) <= 1e-12 * std::max(1.0, ref));
    }
  }

  TEST_CASE("scale equivariance") {
    Rng rng(37);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 200; ++t) {
      auto x = testing::normal_vector(5 + t % 60, rng);
      const double a = u(rng);
      const double b = u(rng);
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
      CHECK(std::fabs(qn(y) - std::fabs(a) * qn(x)) <= 1e-12 * std::max(1.0, qn(y)) * 10);
      CHECK(std::fabs(mad(y) - std::fabs(a) * mad(x)) <= 1e-12 * std::max(1.0, mad(y)) * 10);
    }
  }

  TEST_CASE("qn explosion breakdown at half the sample") {
    Rng rng(41);
    const auto clean = testing::normal_vector(100, rng);
    auto x = clean;
    for (std::size_t i = 0; i < 49; ++i) x[i] = 1e12;
    CHECK(qn(x) < 1e6);
    x = clean;
    for (std::size_t i = 0; i < 51; ++i) x[i] = 1e12 + 1e12 * static_cast<double>(i) / 50.0;
    CHECK(qn(x) > 1e10);
  }

  TEST_CASE("ScaleEstimator dispatch") {
    const std::vector<double> x{1, 2, 4, 8, 9, 13};
    CHECK(ScaleEstimator::qn()(x) == qn(x));
    CHECK(ScaleEstimator::mad()(x) == doctest::Approx(mad(x)).epsilon(1e-15));
    CHECK(ScaleEstimator::sample_sd()(x) == sample_sd(x));
    ScaleEstimator bad = ScaleEstimator::qn();
    bad.consistency_factor = 0.0;
    CHECK_THROWS_AS(bad(x), InvalidArgument);
    CHECK(parse_scale_kind("mad") == ScaleKind::Mad);
    CHECK_THROWS_AS(parse_scale_kind("iqr"), InvalidArgument);
  }

  TEST_CASE("qn is consistent at the normal model") {
    Rng rng(43);
    const auto x = testing::normal_vector(20000, rng, 2.0);
    CHECK(qn(x) == doctest::Approx(2.0).epsilon(0.03));
  }
}
