#include "robglasso/robust_scale.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "robglasso/errors.hpp"
#include "robglasso/kernels.hpp"

namespace robglasso {

namespace {

void require_finite(std::span<const double> x, const char* who) {
  for (double v : x)
    if (!std::isfinite(v)) throw NonFiniteInput(std::string(who) + ": non-finite entry");
}

std::size_t qn_rank(std::size_t n) {
  const std::size_t h = n / 2 + 1;
  return h * (h - 1) / 2;
}

std::vector<double> pairwise_abs_differences(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> diffs(n * (n - 1) / 2);
  const auto& k = kernels::active();
  std::size_t offset = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t len = n - i - 1;
    k.abs_diff(x[i], x.data() + i + 1, diffs.data() + offset, len);
    offset += len;
  }
  return diffs;
}

}  // namespace

double median(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("median: empty input");
  require_finite(x, "median");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

double mad(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mad: empty input");
  const double m = median(x);
  std::vector<double> dev(x.size());
  kernels::abs_diff(m, x, dev);
  return kMadConsistency * median(dev);
}

double qn(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("qn: need at least 2 observations");
  require_finite(x, "qn");
  std::vector<double> diffs = pairwise_abs_differences(x);
  const std::size_t k = qn_rank(x.size());
  std::nth_element(diffs.begin(), diffs.begin() + (k - 1), diffs.end());
  return kQnConsistency * diffs[k - 1];
}

double qn_reference(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("qn: need at least 2 observations");
  require_finite(x, "qn");
  std::vector<double> diffs;
  diffs.reserve(x.size() * (x.size() - 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      diffs.push_back(std::fabs(x[i] - x[j]));
  std::sort(diffs.begin(), diffs.end());
  return kQnConsistency * diffs[qn_rank(x.size()) - 1];
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("sample_sd: need at least 2 observations");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double ScaleEstimator::operator()(std::span<const double> x) const {
  if (!(consistency_factor > 0.0))
    throw InvalidArgument("scale estimator: consistency factor must be positive");
  switch (kind) {
    case ScaleKind::Qn:
      return consistency_factor / kQnConsistency * robglasso::qn(x);
    case ScaleKind::Mad:
      return consistency_factor / kMadConsistency * robglasso::mad(x);
    case ScaleKind::SampleSd:
      return consistency_factor * robglasso::sample_sd(x);
  }
  return 0.0;
}

ScaleKind parse_scale_kind(std::string_view name) {
  if (name == "qn") return ScaleKind::Qn;
  if (name == "mad") return ScaleKind::Mad;
  if (name == "sd") return ScaleKind::SampleSd;
  throw InvalidArgument("unknown scale estimator '" + std::string(name) +
                        "' (expected qn, mad or sd)");
}

std::string_view to_string(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::Qn: return "qn";
    case ScaleKind::Mad: return "mad";
    case ScaleKind::SampleSd: return "sd";
  }
  return "?";
}

}  // namespace robglasso
