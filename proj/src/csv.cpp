#include "saddlekit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "saddlekit/errors.hpp"

namespace saddlekit {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  throw FormatError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) fail(path, line, "bad number '" + s + "'");
  return v;
}

void write_meta(std::ostream& out, const CsvMetadata& meta) {
  for (const auto& [k, v] : meta.entries) out << "# " << k << '=' << v << '\n';
}

std::string opt(const std::optional<double>& v) { return v ? format_shortest(*v) : std::string(); }

void open_or_throw(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
}

}  // namespace

std::string format_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<std::string> CsvMetadata::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

SeriesCsv read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  SeriesCsv out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) out.meta.entries.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!have_header) {
      if (line == "k,r_k,ratio,theory_bound") {
        out.kind = SeriesCsv::Kind::Run;
      } else if (line == "k,x,y") {
        out.kind = SeriesCsv::Kind::Trajectory;
      } else {
        fail(path, line_no, "unrecognised header '" + line + "'");
      }
      have_header = true;
      continue;
    }
    if (out.diverged) fail(path, line_no, "data after divergence marker");
    const auto cells = split_commas(line);
    if (out.kind == SeriesCsv::Kind::Run) {
      if (cells.size() != 4) fail(path, line_no, "expected 4 fields");
      const double k = parse_number(cells[0], path, line_no);
      if (cells[1] == "diverged") {
        out.diverged = true;
        out.diverged_at = static_cast<std::size_t>(k);
        continue;
      }
      out.k.push_back(k);
      out.a.push_back(parse_number(cells[1], path, line_no));
      if (!cells[2].empty()) parse_number(cells[2], path, line_no);
      out.b.push_back(cells[3].empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : parse_number(cells[3], path, line_no));
    } else {
      if (cells.size() != 3) fail(path, line_no, "expected 3 fields");
      out.k.push_back(parse_number(cells[0], path, line_no));
      out.a.push_back(parse_number(cells[1], path, line_no));
      out.b.push_back(parse_number(cells[2], path, line_no));
    }
  }
  if (!have_header) fail(path, line_no, "missing header");
  return out;
}

void write_run_csv(const std::filesystem::path& path, const CsvMetadata& meta,
                   const std::vector<RunCsvRow>& rows, std::optional<std::size_t> diverged_at) {
  std::ofstream out;
  open_or_throw(out, path);
  write_meta(out, meta);
  out << "k,r_k,ratio,theory_bound\n";
  for (const auto& row : rows) {
    out << row.k << ',' << format_shortest(row.r) << ',' << opt(row.ratio) << ','
        << opt(row.theory_bound) << '\n';
  }
  if (diverged_at) out << *diverged_at << ",diverged,,\n";
}

void write_trajectory_csv(const std::filesystem::path& path, const CsvMetadata& meta,
                          const std::vector<std::size_t>& k, const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (k.size() != x.size() || k.size() != y.size()) throw DimensionError("trajectory columns differ in length");
  std::ofstream out;
  open_or_throw(out, path);
  write_meta(out, meta);
  out << "k,x,y\n";
  for (std::size_t i = 0; i < k.size(); ++i) {
    out << k[i] << ',' << format_shortest(x[i]) << ',' << format_shortest(y[i]) << '\n';
  }
}

}  // namespace saddlekit
