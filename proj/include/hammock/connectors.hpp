#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hammock/dataset.hpp"
#include "hammock/error.hpp"
#include "hammock/layout.hpp"
#include "hammock/spec.hpp"
#include "hammock/strata.hpp"

namespace hammock {

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Corners in order: left-low, right-low, right-high, left-high.
using Quad = std::array<Point, 4>;

// Display units per canonical unit along each axis. Rectangle connectors are
// perpendicular in display space, so they need the aspect ratio.
struct DisplayScale {
  double sx = 1;
  double sy = 1;
};

using CellKey = std::pair<CellValue, CellValue>;

// Two-way contingency table of adjacent columns: (left, right) -> rows.
inline std::map<CellKey, std::vector<std::size_t>> crosstab(const Column& a, const Column& b, bool include_missing) {
  if (a.size() != b.size())
    throw data_error("connectors", "columns '" + a.name + "' and '" + b.name + "' differ in length");
  std::map<CellKey, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const CellValue& l = a.cells[i];
    const CellValue& r = b.cells[i];
    if (!include_missing && (l.is_missing() || r.is_missing())) continue;
    cells[{l, r}].push_back(i);
  }
  return cells;
}

// Width of a connector holding `count` rows: counts below minbarfreq are
// drawn as if they held minbarfreq rows.
inline double connector_width(std::size_t count, int minbarfreq, double barwidth, double unit) {
  std::size_t effective = std::max<std::size_t>(count, static_cast<std::size_t>(minbarfreq));
  return static_cast<double>(effective) * unit * barwidth;
}

inline double connector_width(std::size_t count, const PlotSpec& spec, double unit) {
  return connector_width(count, spec.minbarfreq, spec.barwidth, unit);
}

// Stratum widths use the connector formula on each stratum count and are then
// rescaled so they add up to the connector's total width.
inline std::vector<double> stratum_widths(std::span<const Stratum> strata, const PlotSpec& spec, double unit,
                                          double total) {
  std::vector<double> w;
  double sum = 0;
  for (const auto& s : strata) {
    w.push_back(connector_width(s.count, spec, unit));
    sum += w.back();
  }
  if (sum > 0)
    for (auto& x : w) x *= total / sum;
  return w;
}

// Unit offset direction (canonical units per unit of width) for a connector
// from `left` to `right`. Parallelograms offset vertically; rectangles offset
// along the display-space normal so their perpendicular thickness is constant.
inline Point offset_direction(Point left, Point right, ConnectorShape shape, DisplayScale scale) {
  if (shape == ConnectorShape::parallelogram) return {0, 1};
  double dx = (right.x - left.x) * scale.sx;
  double dy = (right.y - left.y) * scale.sy;
  double len = std::hypot(dx, dy);
  double nx = -dy / len;
  double ny = dx / len;
  // A width w spans w * sy display units.
  return {nx * scale.sy / scale.sx, ny};
}

// Sub-band of a connector between offsets lo and hi (in width units from the
// centerline). Returns nothing for a zero-length span.
inline std::optional<Quad> connector_band(Point left, Point right, double lo, double hi, ConnectorShape shape,
                                          DisplayScale scale = {}) {
  if (!(right.x > left.x)) return std::nullopt;
  Point o = offset_direction(left, right, shape, scale);
  auto at = [&](Point p, double t) { return Point{p.x + t * o.x, p.y + t * o.y}; };
  return Quad{at(left, lo), at(right, lo), at(right, hi), at(left, hi)};
}

inline std::optional<Quad> connector_geometry(Point left, Point right, double width, ConnectorShape shape,
                                              DisplayScale scale = {}) {
  return connector_band(left, right, -width / 2, width / 2, shape, scale);
}

struct Connector {
  int left_axis = 0;  // index into the axis list; the right axis is left_axis + 1
  CellValue left_key;
  CellValue right_key;
  std::size_t count = 0;
  std::size_t effective_count = 0;
  double width = 0;
  Point left_anchor;   // centerline endpoints
  Point right_anchor;
  std::vector<std::size_t> rows;
  std::vector<Stratum> strata;
  std::vector<double> stratum_widths;
  std::vector<Quad> polygons;  // one per stratum, stacked default first
};

// Per-observation unit shared by both ends of a connector.
inline double connector_unit(const AxisLayout& left, const AxisLayout& right) {
  return std::sqrt(left.unit * right.unit);
}

// Builds the connectors between every pair of adjacent axes. Connectors
// leaving one band are stacked around the band center, ordered by the y of
// the band at their other end. Nothing is built when space leaves no room.
inline std::vector<Connector> build_connectors(const Dataset& ds, const PlotSpec& spec,
                                               const std::vector<AxisLayout>& axes, DisplayScale scale = {}) {
  std::vector<Connector> out;
  if (axes.size() < 2) return out;
  auto xs = axis_x_positions(static_cast<int>(axes.size()), spec.space);
  if (xs[0].connector_span <= 0) return out;

  const Column* hivar = spec.hivar ? &ds.at(*spec.hivar) : nullptr;
  std::span<const RowPredicate> hivals(spec.hivals);

  for (std::size_t i = 0; i + 1 < axes.size(); ++i) {
    const AxisLayout& la = axes[i];
    const AxisLayout& ra = axes[i + 1];
    auto table = crosstab(ds.at(la.var), ds.at(ra.var), spec.missing);
    double unit = connector_unit(la, ra);

    std::size_t first = out.size();
    for (auto& [key, rows] : table) {
      const ValueBand* lb = la.find(key.first);
      const ValueBand* rb = ra.find(key.second);
      if (!lb || !rb) continue;
      Connector c;
      c.left_axis = static_cast<int>(i);
      c.left_key = key.first;
      c.right_key = key.second;
      c.count = rows.size();
      c.effective_count = std::max<std::size_t>(c.count, static_cast<std::size_t>(spec.minbarfreq));
      c.width = connector_width(c.count, spec, unit);
      c.rows = std::move(rows);
      c.strata = stratify(c.rows, hivar, hivals);
      c.stratum_widths = stratum_widths(c.strata, spec, unit, c.width);
      c.left_anchor.x = xs[i].right_edge();
      c.right_anchor.x = xs[i + 1].left_edge();
      out.push_back(std::move(c));
    }

    // Stack anchors on each band.
    auto stack = [&](bool left_side) {
      std::map<CellValue, std::vector<std::size_t>> by_band;
      for (std::size_t j = first; j < out.size(); ++j)
        by_band[left_side ? out[j].left_key : out[j].right_key].push_back(j);
      for (auto& [key, members] : by_band) {
        const ValueBand* band = (left_side ? la : ra).find(key);
        const AxisLayout& other = left_side ? ra : la;
        std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
          const CellValue& ka = left_side ? out[a].right_key : out[a].left_key;
          const CellValue& kb = left_side ? out[b].right_key : out[b].left_key;
          return other.find(ka)->y_center < other.find(kb)->y_center;
        });
        double total = 0;
        for (auto j : members) total += out[j].width;
        double y = band->y_center - total / 2;
        for (auto j : members) {
          double mid = y + out[j].width / 2;
          (left_side ? out[j].left_anchor : out[j].right_anchor).y = mid;
          y += out[j].width;
        }
      }
    };
    stack(true);
    stack(false);

    for (std::size_t j = first; j < out.size(); ++j) {
      Connector& c = out[j];
      double lo = -c.width / 2;
      for (double w : c.stratum_widths) {
        if (auto q = connector_band(c.left_anchor, c.right_anchor, lo, lo + w, spec.shape, scale))
          c.polygons.push_back(*q);
        lo += w;
      }
    }
  }
  return out;
}

}  // namespace hammock
