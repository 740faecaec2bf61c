#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spde::cli {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), both > 0
  std::optional<double> slope;                    // shown in the legend
};

/// Minimal log-log line plot. Non-positive points are dropped.
std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series);

}  // namespace spde::cli
