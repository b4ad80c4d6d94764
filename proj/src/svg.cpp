#include "saddlekit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "saddlekit/csv.hpp"
#include "saddlekit/errors.hpp"

namespace saddlekit {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 60;

std::string num(double v, const char* f = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
};

// Widens a degenerate or empty interval so the plot transform is defined.
Range padded(Range r) {
  if (r.empty()) return {0.0, 1.0};
  if (r.lo == r.hi) {
    const double pad = r.lo == 0.0 ? 1.0 : std::abs(r.lo) * 0.5;
    return {r.lo - pad, r.hi + pad};
  }
  return r;
}

std::vector<double> linear_ticks(const Range& r) {
  const double span = r.hi - r.lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
  const double pw = opt.width - kMarginLeft - kMarginRight;
  const double ph = opt.height - kMarginTop - kMarginBottom;

  auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
  auto usable = [&](double y) { return std::isfinite(y) && (!opt.log_y || y > 0.0); };

  Range xr, yr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !usable(s.ys[i])) continue;
      xr.add(s.xs[i]);
      yr.add(ty(s.ys[i]));
    }
  }
  xr = padded(xr);
  if (opt.log_y) {
    if (yr.empty()) yr = {0.0, 1.0};
    yr.lo = std::floor(yr.lo);
    yr.hi = std::ceil(yr.hi);
    if (yr.lo == yr.hi) {
      yr.lo -= 1.0;
      yr.hi += 1.0;
    }
  } else {
    yr = padded(yr);
  }

  auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kMarginTop + ph - (ty(y) - yr.lo) / (yr.hi - yr.lo) * ph; };
  auto py_t = [&](double t) { return kMarginTop + ph - (t - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width
    << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height
    << "\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    o << "<text x=\"" << num(kMarginLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(opt.title) << "</text>\n";
  }

  // Grid and tick labels.
  o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  const auto xt = linear_ticks(xr);
  for (double t : xt) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(px(t))
      << "\" y2=\"" << num(kMarginTop + ph) << "\"/>\n";
  }
  std::vector<double> yt;
  if (opt.log_y) {
    const int decades = static_cast<int>(yr.hi - yr.lo);
    const int stride = std::max(1, (decades + 9) / 10);
    for (int e = static_cast<int>(yr.lo); e <= static_cast<int>(yr.hi); e += stride) yt.push_back(e);
  } else {
    yt = linear_ticks(yr);
  }
  for (double t : yt) {
    o << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py_t(t)) << "\" x2=\"" << num(kMarginLeft + pw)
      << "\" y2=\"" << num(py_t(t)) << "\"/>\n";
  }
  o << "</g>\n<g fill=\"black\">\n";
  for (double t : xt) {
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kMarginTop + ph + 18)
      << "\" text-anchor=\"middle\">" << num(t, "%g") << "</text>\n";
  }
  for (double t : yt) {
    const std::string label = opt.log_y ? "1e" + num(t, "%.0f") : num(t, "%g");
    o << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(py_t(t) + 4) << "\" text-anchor=\"end\">"
      << label << "</text>\n";
  }
  if (!opt.x_label.empty()) {
    o << "<text x=\"" << num(kMarginLeft + pw / 2) << "\" y=\"" << opt.height - 18
      << "\" text-anchor=\"middle\">" << escape(opt.x_label) << "</text>\n";
  }
  if (!opt.y_label.empty()) {
    o << "<text x=\"18\" y=\"" << num(kMarginTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(kMarginTop + ph / 2) << ")\">" << escape(opt.y_label) << "</text>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(pw) << "\" height=\""
    << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Data. A non-plottable value breaks the line.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::vector<std::vector<std::pair<double, double>>> segments(1);
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !usable(s.ys[i])) {
        if (!segments.back().empty()) segments.emplace_back();
        continue;
      }
      segments.back().emplace_back(px(s.xs[i]), py(s.ys[i]));
    }
    for (const auto& seg : segments) {
      if (seg.empty()) continue;
      if (seg.size() == 1) {
        o << "<circle cx=\"" << num(seg[0].first) << "\" cy=\"" << num(seg[0].second)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        continue;
      }
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < seg.size(); ++i) {
        if (i) o << ' ';
        o << num(seg[i].first) << ',' << num(seg[i].second);
      }
      o << "\"/>\n";
    }
  }

  // Legend.
  const double lx = kMarginLeft + pw + 16;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    const double ly = kMarginTop + 12 + 20.0 * static_cast<double>(si);
    o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24) << "\" y2=\""
      << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\">" << escape(series[si].label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void plot_csv_files(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out) {
  if (inputs.empty()) throw FormatError("no CSV files to plot");
  std::vector<PlotSeries> series;
  std::optional<SeriesCsv::Kind> kind;
  for (const auto& path : inputs) {
    SeriesCsv csv = read_series_csv(path);
    if (kind && *kind != csv.kind) throw FormatError(path.string() + ": cannot mix run and trajectory files");
    kind = csv.kind;
    PlotSeries s;
    s.label = csv.meta.get("label").value_or(csv.meta.get("method").value_or(path.stem().string()));
    if (csv.diverged) s.label += " (diverged)";
    if (csv.kind == SeriesCsv::Kind::Run) {
      s.xs = csv.k;
      s.ys = csv.a;
    } else {
      s.xs = csv.a;
      s.ys = csv.b;
    }
    series.push_back(std::move(s));
  }
  PlotOptions opt;
  if (*kind == SeriesCsv::Kind::Run) {
    opt.log_y = true;
    opt.x_label = "iteration k";
    opt.y_label = "r_k";
  } else {
    opt.x_label = "x";
    opt.y_label = "y";
  }
  const std::string svg = render_svg(series, opt);
  std::ofstream f(out, std::ios::binary);
  if (!f) throw FormatError("cannot write " + out.string());
  f << svg;
}

}  // namespace saddlekit
