#include "svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "csv.hpp"

namespace spde::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr std::array<const char*, 4> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fmt(double v) { return format_fixed(v, 2); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-9) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

}  // namespace

std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series) {
  Range xr;
  Range yr;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (x > 0.0 && y > 0.0) {
        xr.include(std::log10(x));
        yr.include(std::log10(y));
      }
    }
  }
  xr.pad();
  yr.pad();
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double lx) { return kLeft + (lx - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  const auto py = [&](double ly) { return kTop + (yr.hi - ly) / (yr.hi - yr.lo) * plot_h; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  out += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) + "\" height=\"" +
         fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int d = static_cast<int>(std::ceil(xr.lo)); d <= static_cast<int>(std::floor(xr.hi)); ++d) {
    const double x = px(d);
    out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kTop + plot_h + 18) + "\" text-anchor=\"middle\">1e" +
           std::to_string(d) + "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(yr.lo)); d <= static_cast<int>(std::floor(yr.hi)); ++d) {
    const double y = py(d);
    out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">1e" +
           std::to_string(d) + "</text>\n";
  }
  out += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 15) + "\" text-anchor=\"middle\">" +
         escape(x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt(kTop + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % kColors.size()];
    std::string pts;
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt(px(std::log10(x))) + "," + fmt(py(std::log10(y)));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts +
           "\"/>\n";
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      out += "<circle cx=\"" + fmt(px(std::log10(x))) + "\" cy=\"" + fmt(py(std::log10(y))) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    const double ly = kTop + 16.0 + 36.0 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 12.0;
    out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 20) + "\" y2=\"" + fmt(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(lx + 26) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(s.label) + "</text>\n";
    if (s.slope) {
      out += "<text x=\"" + fmt(lx + 26) + "\" y=\"" + fmt(ly + 18) + "\">slope " + format_fixed(*s.slope, 3) +
             "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace spde::cli
