#include "robglasso/data_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "robglasso/errors.hpp"

namespace robglasso {

DataMatrix DataMatrix::from_rows(std::size_t n, std::size_t p,
                                 std::span<const double> row_major) {
  if (row_major.size() != n * p)
    throw InvalidArgument("DataMatrix::from_rows: expected n*p values");
  DataMatrix x(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) x(i, j) = row_major[i * p + j];
  return x;
}

std::vector<double> DataMatrix::row(std::size_t i) const {
  std::vector<double> r(p_);
  for (std::size_t j = 0; j < p_; ++j) r[j] = (*this)(i, j);
  return r;
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> indices) const {
  DataMatrix out(indices.size(), p_);
  for (std::size_t j = 0; j < p_; ++j) {
    const auto src = column(j);
    auto dst = out.column(j);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      if (indices[r] >= n_) throw InvalidArgument("select_rows: index out of range");
      dst[r] = src[indices[r]];
    }
  }
  out.names_ = names_;
  return out;
}

DataMatrix DataMatrix::with_column(std::span<const double> y, std::string name) const {
  if (y.size() != n_) throw InvalidArgument("with_column: length mismatch");
  DataMatrix out(n_, p_ + 1);
  std::copy(values_.begin(), values_.end(), out.values_.begin());
  std::copy(y.begin(), y.end(), out.values_.begin() + static_cast<long>(n_ * p_));
  if (!names_.empty()) {
    out.names_ = names_;
    out.names_.push_back(name.empty() ? "y" : std::move(name));
  }
  return out;
}

void DataMatrix::set_column_names(std::vector<std::string> names) {
  if (!names.empty() && names.size() != p_)
    throw InvalidArgument("set_column_names: expected one name per column");
  names_ = std::move(names);
}

bool DataMatrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace robglasso
