#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "robglasso/data_matrix.hpp"
#include "robglasso/glasso.hpp"
#include "robglasso/linalg.hpp"

namespace robglasso {

/// Comma-separated numeric table. Ragged rows, empty cells and non-numeric
/// cells raise ParseError with 1-based file row and column.
DataMatrix parse_csv(std::istream& in, bool has_header);
DataMatrix ingest_csv(const std::filesystem::path& path, bool has_header);

/// p x p matrix, 17 significant digits.
void write_matrix_csv(std::ostream& os, const SymMatrix& m);

/// "i\tj\tweight" header then one line per |theta_ij| > zero_tol, i < j,
/// 0-based. Returns the number of edges written.
std::size_t write_edges_tsv(std::ostream& os, const SymMatrix& theta,
                            double zero_tol = kDefaultZeroTol);

}  // namespace robglasso
