#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace saddlekit {

// Shortest decimal string that parses back to the same double.
std::string format_shortest(double v);

struct RunCsvRow {
  std::size_t k;
  double r;
  std::optional<double> ratio;
  std::optional<double> theory_bound;
};

struct CsvMetadata {
  std::vector<std::pair<std::string, std::string>> entries;  // "# key=value" lines, in order
  std::optional<std::string> get(const std::string& key) const;
};

// A parsed run (`k,r_k,ratio,theory_bound`) or trajectory (`k,x,y`) file.
struct SeriesCsv {
  enum class Kind { Run, Trajectory };
  Kind kind = Kind::Run;
  CsvMetadata meta;
  std::vector<double> k;
  std::vector<double> a;  // r_k or x
  std::vector<double> b;  // theory bound (NaN when empty) or y
  bool diverged = false;
  std::optional<std::size_t> diverged_at;
};

// Throws FormatError naming the line on malformed input.
SeriesCsv read_series_csv(const std::filesystem::path& path);

void write_run_csv(const std::filesystem::path& path, const CsvMetadata& meta,
                   const std::vector<RunCsvRow>& rows, std::optional<std::size_t> diverged_at);
void write_trajectory_csv(const std::filesystem::path& path, const CsvMetadata& meta,
                          const std::vector<std::size_t>& k, const std::vector<double>& x,
                          const std::vector<double>& y);

}  // namespace saddlekit
