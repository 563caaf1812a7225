#pragma once

#include <iosfwd>
#include <string>

#include "spgemm/csc_matrix.hpp"

namespace spgemm {

/// Parses "%%MatrixMarket matrix coordinate {real|integer|pattern}
/// {general|symmetric}". Symmetric input is expanded to both triangles and
/// pattern entries get the value 1.0. Throws FormatError on anything else.
CscMatrix read_matrix_market(std::istream& in);
CscMatrix read_matrix_market_file(const std::string& path);

/// Writes "coordinate real general" with round-trip precision.
void write_matrix_market(std::ostream& out, const CscMatrix& m);
void write_matrix_market_file(const std::string& path, const CscMatrix& m);

}  // namespace spgemm
