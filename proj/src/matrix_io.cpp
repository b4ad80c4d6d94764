#include "saddlekit/matrix_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "saddlekit/errors.hpp"

namespace saddlekit {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

double parse_double(const std::string& tok, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line_no) + ": bad value '" + tok + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& tok, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || tok.empty() || tok[0] == '-' || v == 0) {
    throw FormatError("line " + std::to_string(line_no) + ": bad dimension '" + tok + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

DenseMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_nonblank = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!tokens(line).empty()) return true;
    }
    return false;
  };

  if (!next_nonblank()) throw FormatError("line 1: missing header");
  const auto header = tokens(line);
  if (header.size() != 2) throw FormatError("line " + std::to_string(line_no) + ": expected 'rows cols'");
  const std::size_t rows = parse_size(header[0], line_no);
  const std::size_t cols = parse_size(header[1], line_no);

  std::vector<double> data;
  data.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!next_nonblank()) {
      throw FormatError("line " + std::to_string(line_no + 1) + ": expected " + std::to_string(rows) +
                        " rows, got " + std::to_string(r));
    }
    const auto row = tokens(line);
    if (row.size() != cols) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                        " values, got " + std::to_string(row.size()));
    }
    for (const auto& t : row) data.push_back(parse_double(t, line_no));
  }
  if (next_nonblank()) throw FormatError("line " + std::to_string(line_no) + ": trailing data");
  return DenseMatrix(rows, cols, std::move(data));
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_matrix(in);
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_g17(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  write_matrix(out, m);
}

}  // namespace saddlekit
