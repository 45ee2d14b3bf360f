#include <stdexcept>
#include <string>

#include "doctest.h"
#include "landmarkbm/svg.hpp"

using namespace landmarkbm;

namespace {

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
  return n;
}

std::string points_of(const std::string& svg) {
  const auto start = svg.find("points=\"") + 8;
  return svg.substr(start, svg.find('"', start) - start);
}

}  // namespace

TEST_CASE("constant series is one horizontal polyline") {
  PlotSpec spec;
  spec.title = "flat";
  PlotSeries s{{0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}};
  const auto svg = emit_svg(spec, {s});
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<polyline") == 1);
  CHECK(count(svg, "<circle") == 0);
  // every vertex has the same y
  const auto pts = points_of(svg);
  std::string y;
  for (std::size_t pos = 0; pos < pts.size();) {
    const auto comma = pts.find(',', pos);
    auto end = pts.find(' ', comma);
    if (end == std::string::npos) end = pts.size();
    const auto this_y = pts.substr(comma + 1, end - comma - 1);
    if (y.empty()) y = this_y;
    CHECK(this_y == y);
    pos = end + 1;
  }
}

TEST_CASE("stopped path ends at its marker") {
  PlotSpec spec;
  PlotSeries s{{0.0, 0.1, 0.2}, {1.0, 1e-3, 1e-9}, true};
  const auto svg = emit_svg(spec, {s});
  CHECK(count(svg, "<circle") == 1);
  const auto pts = points_of(svg);
  const auto last = pts.substr(pts.rfind(' ') + 1);
  const auto cx = svg.substr(svg.find("cx=\"") + 4);
  const auto cy = svg.substr(svg.find("cy=\"") + 4);
  CHECK(last == cx.substr(0, cx.find('"')) + "," + cy.substr(0, cy.find('"')));
}

TEST_CASE("log plot clips at the floor") {
  PlotSpec spec;
  spec.log_floor = 1e-8;
  PlotSeries s{{0.0, 1.0}, {1.0, 0.0}};
  const auto svg = emit_svg(spec, {s});
  CHECK(svg.find("inf") == std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find(">-8<") != std::string::npos);
}

TEST_CASE("output is deterministic and escaped") {
  PlotSpec spec;
  spec.kind = PlotKind::PositionVsTime;
  spec.title = "a<b & c";
  PlotSeries s{{0.0, 0.3, -0.2}, {0.0, 0.5, 1.0}, false, true};
  const auto a = emit_svg(spec, {s, s});
  CHECK(a == emit_svg(spec, {s, s}));
  CHECK(a.find("a&lt;b &amp; c") != std::string::npos);
  CHECK(a.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("empty data rejected") {
  PlotSpec spec;
  CHECK_THROWS_AS(emit_svg(spec, {}), std::invalid_argument);
  CHECK_THROWS_AS(emit_svg(spec, {PlotSeries{}}), std::invalid_argument);
  CHECK_THROWS_AS(emit_svg(spec, {PlotSeries{{0.0}, {}}}), std::invalid_argument);
}
