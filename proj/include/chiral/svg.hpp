#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chiral {

struct SvgCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  double y_floor = 1e-6;  // lower clip in log mode
  std::vector<SvgCurve> curves;
};

/// Axis box, ticks at the extremes, one polyline per curve and a legend.
void write_svg(const SvgPlot& plot, const std::filesystem::path& path);

}  // namespace chiral
