#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "saddlekit/densela.hpp"

namespace saddlekit {

// Plain-text matrix format: a header line "rows cols" followed by one line per
// row of space-separated values. Writers use 17 significant digits so a
// write/read cycle is exact.
//
// Malformed input throws FormatError naming the offending line.
DenseMatrix read_matrix(std::istream& in);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const DenseMatrix& m);
void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m);

// %.17g rendering of a single value.
std::string format_g17(double v);

}  // namespace saddlekit
