#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace saddlekit {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 800;
  int height = 500;
};

// Self-contained SVG 1.1 line plot. Non-positive values are skipped on a log
// axis. Output depends only on the inputs.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

// Plots run or trajectory CSVs (all of one kind) into `out`. Run files get a
// log-scale r_k axis, trajectory files an x-y phase plot. Throws FormatError
// when the files are malformed or mix kinds.
void plot_csv_files(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out);

}  // namespace saddlekit
