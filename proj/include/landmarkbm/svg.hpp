#pragma once

#include <string>
#include <vector>

namespace landmarkbm {

enum class PlotKind { LogDistanceVsTime, PositionVsTime };

struct PlotSeries {
  /// (x, y) in data coordinates. For PositionVsTime x is the position and y the time.
  std::vector<double> x;
  std::vector<double> y;
  /// Draw a stop marker at the last point.
  bool stopped = false;
  bool dashed = false;
};

struct PlotSpec {
  PlotKind kind = PlotKind::LogDistanceVsTime;
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Log-distance plots clip values below this floor instead of emitting -inf.
  double log_floor = 1e-12;
  int width = 480;
  int height = 360;
};

/// Standalone SVG document. Output depends only on the inputs (no timestamps, fixed
/// number formatting), so identical data gives identical bytes.
std::string emit_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace landmarkbm
