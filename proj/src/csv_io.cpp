#include "robglasso/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <vector>

#include "robglasso/errors.hpp"
#include "robglasso/format.hpp"

namespace robglasso {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  cell = trim(cell);
  if (cell.empty()) throw ParseError(row, col, "empty cell");
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw ParseError(row, col, "non-numeric cell '" + std::string(cell) + "'");
  if (!std::isfinite(v)) throw ParseError(row, col, "non-finite cell");
  return v;
}

}  // namespace

DataMatrix parse_csv(std::istream& in, bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t p = 0;
  std::size_t n = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (header_pending) {
      header_pending = false;
      for (auto c : cells) names.emplace_back(trim(c));
      p = cells.size();
      continue;
    }
    if (p == 0) p = cells.size();
    if (cells.size() != p)
      throw ParseError(line_no, std::min(cells.size(), p) + 1,
                       "expected " + std::to_string(p) + " fields, found " +
                           std::to_string(cells.size()));
    for (std::size_t j = 0; j < p; ++j) values.push_back(parse_cell(cells[j], line_no, j + 1));
    ++n;
  }
  if (n == 0) throw ParseError(line_no, 0, "no data rows");
  DataMatrix x = DataMatrix::from_rows(n, p, values);
  if (has_header) x.set_column_names(std::move(names));
  return x;
}

DataMatrix ingest_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return parse_csv(in, has_header);
}

void write_matrix_csv(std::ostream& os, const SymMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j > 0) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

std::size_t write_edges_tsv(std::ostream& os, const SymMatrix& theta, double zero_tol) {
  os << "i\tj\tweight\n";
  std::size_t count = 0;
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    for (std::size_t j = i + 1; j < theta.dim(); ++j) {
      if (std::fabs(theta(i, j)) > zero_tol) {
        os << i << '\t' << j << '\t' << format_double(theta(i, j)) << '\n';
        ++count;
      }
    }
  }
  return count;
}

}  // namespace robglasso
