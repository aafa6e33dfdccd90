#include "chiral/svg.hpp"

#include "chiral/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace chiral {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kColors = {"#d62728", "#1f77b4", "#2ca02c", "#000000",
                                                "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

void write_svg(const SvgPlot& plot, const std::filesystem::path& path) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  auto transform_y = [&](double y) {
    return plot.log_y ? std::log10(std::max(y, plot.y_floor)) : y;
  };
  for (const auto& c : plot.curves) {
    if (c.x.size() != c.y.size()) {
      throw Error(ErrorCode::DimensionMismatch, "curve '" + c.label + "' has mismatched columns");
    }
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      x_min = std::min(x_min, c.x[i]);
      x_max = std::max(x_max, c.x[i]);
      y_min = std::min(y_min, transform_y(c.y[i]));
      y_max = std::max(y_max, transform_y(c.y[i]));
    }
  }
  if (!std::isfinite(x_min) || !std::isfinite(y_min)) {
    throw Error(ErrorCode::InvalidArgument, "nothing to plot in " + path.string());
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) {
    return kTop + (1.0 - (transform_y(y) - y_min) / (y_max - y_min)) * plot_h;
  };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\">"
      << escape(plot.title) << "</text>\n";
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\" text-anchor=\"middle\">" << escape(plot.y_label)
      << (plot.log_y ? " (log10)" : "") << "</text>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 18
      << "\" text-anchor=\"middle\">" << tick(x_min) << "</text>\n";
  out << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 18
      << "\" text-anchor=\"middle\">" << tick(x_max) << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h << "\" text-anchor=\"end\">"
      << tick(y_min) << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">"
      << tick(y_max) << "</text>\n";

  for (std::size_t c = 0; c < plot.curves.size(); ++c) {
    const auto& curve = plot.curves[c];
    const char* color = kColors[c % kColors.size()];
    // Thin long series so files stay small; 2000 vertices is plenty by eye.
    const std::size_t stride = std::max<std::size_t>(1, curve.x.size() / 2000);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < curve.x.size(); i += stride) {
      out << num(px(curve.x[i])) << ',' << num(py(curve.y[i])) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(c + 1);
    out << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kRight + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly + 4 << "\">"
        << escape(curve.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace chiral
