#include "landmarkbm/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace landmarkbm {
namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                  "#bcbd22", "#17becf"};
constexpr double kMarginLeft = 64, kMarginRight = 16, kMarginTop = 32, kMarginBottom = 48;
// points closer than this (in pixels) to the last emitted one are dropped
constexpr double kMinPixelStep = 0.25;

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
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
  void pad() {
    if (!(hi > lo)) {
      const double half = std::max(std::abs(lo) * 0.05, 0.5);
      lo -= half;
      hi += half;
    }
  }
};

}  // namespace

std::string emit_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  if (series.empty()) throw std::invalid_argument("emit_svg: no series");
  const bool log_y = spec.kind == PlotKind::LogDistanceVsTime;
  const auto y_value = [&](double y) {
    return log_y ? std::log10(std::max(y, spec.log_floor)) : y;
  };

  Range xr, yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("emit_svg: x/y length mismatch");
    if (s.x.empty()) throw std::invalid_argument("emit_svg: empty series");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(s.x[i]);
      yr.add(y_value(s.y[i]));
    }
  }
  xr.pad();
  yr.pad();

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  const auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  // time runs upward in position plots, as does log-distance
  const auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(spec.width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escape(spec.title) << "</text>\n";
  out << "<rect x=\"" << fixed(kMarginLeft) << "\" y=\"" << fixed(kMarginTop) << "\" width=\""
      << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    out << "<line x1=\"" << fixed(px(xv)) << "\" y1=\"" << fixed(kMarginTop + plot_h) << "\" x2=\""
        << fixed(px(xv)) << "\" y2=\"" << fixed(kMarginTop + plot_h + 4) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(kMarginTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    out << "<line x1=\"" << fixed(kMarginLeft - 4) << "\" y1=\"" << fixed(py(yv)) << "\" x2=\""
        << fixed(kMarginLeft) << "\" y2=\"" << fixed(py(yv)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(kMarginLeft - 6) << "\" y=\"" << fixed(py(yv) + 3)
        << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  out << "<text x=\"" << fixed(kMarginLeft + plot_w / 2) << "\" y=\"" << fixed(spec.height - 8.0)
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  out << "<text transform=\"translate(14," << fixed(kMarginTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";
  out << "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\"";
    if (s.dashed) out << " stroke-dasharray=\"4 2\"";
    out << " points=\"";
    double last_x = 0, last_y = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = px(s.x[i]);
      const double y = py(y_value(s.y[i]));
      const bool final_point = i + 1 == s.x.size();
      if (i > 0 && !final_point && std::abs(x - last_x) < kMinPixelStep &&
          std::abs(y - last_y) < kMinPixelStep)
        continue;
      if (i > 0) out << ' ';
      out << fixed(x) << ',' << fixed(y);
      last_x = x;
      last_y = y;
    }
    out << "\"/>\n";
    if (s.stopped) {
      out << "<circle cx=\"" << fixed(last_x) << "\" cy=\"" << fixed(last_y)
          << "\" r=\"3\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace landmarkbm
