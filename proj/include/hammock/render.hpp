#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hammock/color.hpp"
#include "hammock/connectors.hpp"
#include "hammock/dataset.hpp"
#include "hammock/error.hpp"
#include "hammock/layout.hpp"
#include "hammock/spec.hpp"

namespace hammock {

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

enum class Role { connector, bar, yline, label, annotation };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::connector: return "connector";
    case Role::bar: return "bar";
    case Role::yline: return "yline";
    case Role::label: return "label";
    case Role::annotation: return "annotation";
  }
  return "?";
}

struct PolygonItem {
  std::vector<Point> points;
  Color fill;
  Role role = Role::connector;
  int color_index = 0;
  std::string var;   // axis variable (left axis for connectors)
  std::string band;  // band id for bars, "left|right" for connectors
};

struct LineItem {
  Point a;
  Point b;
  Color stroke;
  double stroke_width = 1;
  bool dashed = false;
  Role role = Role::yline;
  int color_index = 0;
  std::string var;
  std::string band;
};

struct TextItem {
  Point at;
  std::string anchor = "middle";  // SVG text-anchor
  double size = 10;
  std::string content;
  Role role = Role::label;
};

using SceneItem = std::variant<PolygonItem, LineItem, TextItem>;

// Canvas-space draw list. Order is draw order.
struct Scene {
  double width = 1000;
  double height = 600;
  std::vector<SceneItem> items;
};

// Affine map from canonical coordinates onto the canvas plot area.
struct Viewport {
  double x0 = 0.5, x1 = 1.5;  // canonical domain
  double y0 = 0, y1 = 100;
  double left = 0, right = 1000, top = 0, bottom = 600;  // canvas pixels
  double width = 1000, height = 600;

  DisplayScale scale() const { return {(right - left) / (x1 - x0), (bottom - top) / (y1 - y0)}; }

  Point map(Point p) const {
    DisplayScale s = scale();
    double X = left + (p.x - x0) * s.sx;
    double Y = bottom - (p.y - y0) * s.sy;
    return {std::clamp(X, 0.0, width), std::clamp(Y, 0.0, height)};
  }
};

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void add(Point p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
};

inline Viewport make_viewport(const PlotSpec& spec, std::size_t k, const Bounds& content) {
  Viewport vp;
  vp.width = spec.canvas.width;
  vp.height = spec.canvas.height;
  vp.x0 = std::min(0.5, content.xmin);
  vp.x1 = std::max(static_cast<double>(k) + 0.5, content.xmax);
  vp.y0 = std::min(0.0, content.ymin);
  vp.y1 = std::max(100.0, content.ymax);
  double side = std::min(30.0, 0.05 * spec.canvas.width);
  double pad = std::min(20.0, 0.05 * spec.canvas.height);
  vp.left = side;
  vp.right = spec.canvas.width - side;
  vp.top = pad;
  vp.bottom = spec.canvas.height - pad - (spec.nolabel ? 0.0 : 2.5 * spec.label_size);
  if (vp.bottom <= vp.top) vp.bottom = spec.canvas.height - pad;
  return vp;
}

// ---------------------------------------------------------------------------
// Scene construction
// ---------------------------------------------------------------------------

inline std::string band_id(const CellValue& key) { return key.is_missing() ? "missing" : to_string(key); }

namespace detail {

// Bar rectangle split into strata bottom to top, default first.
inline std::vector<std::pair<int, std::pair<double, double>>> bar_pieces(const ValueBand& b) {
  std::vector<std::pair<int, std::pair<double, double>>> out;
  double total = 0;
  for (const auto& s : b.strata) total += static_cast<double>(s.count);
  double y = b.y_center - b.bar_height / 2;
  for (const auto& s : b.strata) {
    double h = total > 0 ? b.bar_height * static_cast<double>(s.count) / total : 0;
    out.push_back({s.color_index, {y, y + h}});
    y += h;
  }
  return out;
}

inline void add_bounds(Bounds& bb, const std::vector<AxisLayout>& axes, const std::vector<Connector>& conns,
                       const PlotSpec& spec) {
  auto xs = axis_x_positions(static_cast<int>(axes.size()), spec.space);
  if (!spec.nounibar) {
    for (std::size_t i = 0; i < axes.size(); ++i) {
      auto add_band = [&](const ValueBand& b) {
        bb.add({xs[i].left_edge(), b.y_center - b.bar_height / 2});
        bb.add({xs[i].right_edge(), b.y_center + b.bar_height / 2});
      };
      for (const auto& b : axes[i].bands) add_band(b);
      if (axes[i].missing_band) add_band(*axes[i].missing_band);
    }
  }
  for (const auto& c : conns)
    for (const auto& q : c.polygons)
      for (const auto& p : q) bb.add(p);
}

}  // namespace detail

// Draw order: connector strata by color index (default first), bars in the
// same color order, ylines, axis labels, annotations.
inline Scene build_scene(const std::vector<AxisLayout>& axes, const std::vector<Connector>& conns,
                         const PlotSpec& spec, const Viewport& vp) {
  const std::size_t k = axes.size();
  for (const auto& a : spec.annotations) {
    if (a.x < 1 || a.x > static_cast<double>(k))
      throw render_error("annotation '" + a.text + "' has x outside [1," + std::to_string(k) + "]");
    if (a.y < 0 || a.y > 100) throw render_error("annotation '" + a.text + "' has y outside [0,100]");
  }
  std::vector<Color> colors = resolve_colors(spec.colorlist);
  auto color_for = [&](int idx) { return colors.at(static_cast<std::size_t>(idx)); };
  auto xs = axis_x_positions(static_cast<int>(k), spec.space);
  int max_color = static_cast<int>(colors.size()) - 1;

  Scene scene;
  scene.width = spec.canvas.width;
  scene.height = spec.canvas.height;
  auto mapped = [&](std::span<const Point> pts) {
    std::vector<Point> out;
    for (const auto& p : pts) out.push_back(vp.map(p));
    return out;
  };

  for (int ci = 0; ci <= max_color; ++ci) {
    for (const auto& c : conns) {
      for (std::size_t s = 0; s < c.strata.size() && s < c.polygons.size(); ++s) {
        if (c.strata[s].color_index != ci) continue;
        PolygonItem p;
        p.points = mapped(c.polygons[s]);
        p.fill = color_for(ci);
        p.role = Role::connector;
        p.color_index = ci;
        p.var = axes[static_cast<std::size_t>(c.left_axis)].var;
        p.band = band_id(c.left_key) + "|" + band_id(c.right_key);
        scene.items.emplace_back(std::move(p));
      }
    }
  }

  if (!spec.nounibar) {
    for (int ci = 0; ci <= max_color; ++ci) {
      for (std::size_t i = 0; i < k; ++i) {
        auto emit = [&](const ValueBand& b) {
          for (const auto& [idx, range] : detail::bar_pieces(b)) {
            if (idx != ci) continue;
            const auto [lo, hi] = range;
            if (xs[i].bar_half_width > 0) {
              PolygonItem p;
              Point pts[4] = {{xs[i].left_edge(), lo}, {xs[i].right_edge(), lo}, {xs[i].right_edge(), hi},
                              {xs[i].left_edge(), hi}};
              p.points = mapped(pts);
              p.fill = color_for(ci);
              p.role = Role::bar;
              p.color_index = ci;
              p.var = axes[i].var;
              p.band = band_id(b.key);
              scene.items.emplace_back(std::move(p));
            } else {
              LineItem l;
              l.a = vp.map({xs[i].x_center, lo});
              l.b = vp.map({xs[i].x_center, hi});
              l.stroke = color_for(ci);
              l.stroke_width = 2;
              l.role = Role::bar;
              l.color_index = ci;
              l.var = axes[i].var;
              l.band = band_id(b.key);
              scene.items.emplace_back(std::move(l));
            }
          }
        };
        for (const auto& b : axes[i].bands) emit(b);
        if (axes[i].missing_band) emit(*axes[i].missing_band);
      }
    }
  }

  for (double y : spec.ylines) {
    LineItem l;
    l.a = vp.map({vp.x0, y});
    l.b = vp.map({vp.x1, y});
    l.stroke = Color{0, 0, 0};
    l.stroke_width = 1;
    l.dashed = true;
    l.role = Role::yline;
    scene.items.emplace_back(std::move(l));
  }

  if (!spec.nolabel) {
    for (std::size_t i = 0; i < k; ++i) {
      const AxisLayout& a = axes[i];
      auto label_band = [&](const ValueBand& b) {
        TextItem t;
        t.at = vp.map({xs[i].x_center, b.y_center});
        t.size = spec.label_size;
        t.content = b.text;
        scene.items.emplace_back(std::move(t));
      };
      if (a.kind == ColumnKind::categorical) {
        for (const auto& b : a.bands) label_band(b);
      } else if (!a.bands.empty()) {
        label_band(a.bands.front());
        if (a.bands.size() > 1) label_band(a.bands.back());
      }
      if (a.missing_band) label_band(*a.missing_band);
    }
    for (std::size_t i = 0; i < k; ++i) {
      TextItem t;
      Point base = vp.map({xs[i].x_center, vp.y0});
      t.at = {base.x, std::min(vp.height, vp.bottom + 1.5 * spec.label_size)};
      t.size = spec.label_size;
      t.content = axes[i].label;
      scene.items.emplace_back(std::move(t));
    }
  }

  for (const auto& a : spec.annotations) {
    TextItem t;
    t.at = vp.map({a.x, a.y});
    t.size = spec.label_size;
    t.content = a.text;
    t.role = Role::annotation;
    scene.items.emplace_back(std::move(t));
  }
  return scene;
}

// Everything computed for one plot, kept for inspection.
struct Plot {
  PlotSpec spec;
  std::vector<AxisLayout> axes;
  std::vector<Connector> connectors;
  Viewport viewport;
  Scene scene;
};

// Full pipeline: validate, lay out axes, build connectors, fit the viewport
// to the content and build the scene. Rectangle connectors depend on the
// display aspect, so connectors and viewport are iterated to a fixed point.
inline Plot render_plot(const Dataset& ds, const PlotSpec& input) {
  Plot plot;
  plot.spec = validated(input, ds);
  const PlotSpec& spec = plot.spec;
  plot.axes = build_layouts(ds, spec);
  const std::size_t k = plot.axes.size();

  Viewport vp = make_viewport(spec, k, Bounds{});
  for (int iter = 0; iter < 8; ++iter) {
    plot.connectors = build_connectors(ds, spec, plot.axes, vp.scale());
    Bounds bb;
    detail::add_bounds(bb, plot.axes, plot.connectors, spec);
    Viewport next = make_viewport(spec, k, bb);
    bool stable = std::fabs(next.x0 - vp.x0) < 1e-12 && std::fabs(next.x1 - vp.x1) < 1e-12 &&
                  std::fabs(next.y0 - vp.y0) < 1e-12 && std::fabs(next.y1 - vp.y1) < 1e-12;
    vp = next;
    if (stable) break;
  }
  plot.connectors = build_connectors(ds, spec, plot.axes, vp.scale());
  plot.viewport = vp;
  plot.scene = build_scene(plot.axes, plot.connectors, spec, vp);
  return plot;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct SvgOptions {
  bool strip_opacity = false;
};

namespace detail {

inline std::string fmt3(double v) {
  if (std::fabs(v) < 0.0005) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string opacity_attr(const char* name, const Color& c, const SvgOptions& opt) {
  if (opt.strip_opacity || c.opacity >= 1.0) return "";
  return std::string(" ") + name + "=\"" + fmt3(c.opacity) + "\"";
}

}  // namespace detail

inline void emit_svg(const Scene& scene, std::ostream& out, const SvgOptions& opt = {}) {
  using detail::fmt3;
  using detail::xml_escape;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt3(scene.width)
      << "\" height=\"" << fmt3(scene.height) << "\" viewBox=\"0 0 " << fmt3(scene.width) << ' '
      << fmt3(scene.height) << "\">\n";
  out << "<rect x=\"0.000\" y=\"0.000\" width=\"" << fmt3(scene.width) << "\" height=\"" << fmt3(scene.height)
      << "\" fill=\"#ffffff\"/>\n";
  for (const auto& item : scene.items) {
    if (const auto* p = std::get_if<PolygonItem>(&item)) {
      out << "<polygon class=\"" << to_string(p->role) << "\" data-var=\"" << xml_escape(p->var)
          << "\" data-band=\"" << xml_escape(p->band) << "\" data-color=\"" << p->color_index << "\" points=\"";
      for (std::size_t i = 0; i < p->points.size(); ++i)
        out << (i ? " " : "") << fmt3(p->points[i].x) << ',' << fmt3(p->points[i].y);
      out << "\" fill=\"" << p->fill.hex() << '"' << detail::opacity_attr("fill-opacity", p->fill, opt) << "/>\n";
    } else if (const auto* l = std::get_if<LineItem>(&item)) {
      out << "<line class=\"" << to_string(l->role) << '"';
      if (l->role == Role::bar)
        out << " data-var=\"" << xml_escape(l->var) << "\" data-band=\"" << xml_escape(l->band)
            << "\" data-color=\"" << l->color_index << '"';
      out << " x1=\"" << fmt3(l->a.x) << "\" y1=\"" << fmt3(l->a.y) << "\" x2=\"" << fmt3(l->b.x) << "\" y2=\""
          << fmt3(l->b.y) << "\" stroke=\"" << l->stroke.hex() << '"'
          << detail::opacity_attr("stroke-opacity", l->stroke, opt) << " stroke-width=\"" << fmt3(l->stroke_width)
          << '"';
      if (l->dashed) out << " stroke-dasharray=\"6,4\"";
      out << "/>\n";
    } else if (const auto* t = std::get_if<TextItem>(&item)) {
      out << "<text class=\"" << to_string(t->role) << "\" x=\"" << fmt3(t->at.x) << "\" y=\"" << fmt3(t->at.y)
          << "\" font-family=\"sans-serif\" font-size=\"" << fmt3(t->size) << "\" text-anchor=\"" << t->anchor
          << "\" dominant-baseline=\"middle\">" << xml_escape(t->content) << "</text>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw render_error("failed writing SVG output");
}

inline std::string to_svg(const Scene& scene, const SvgOptions& opt = {}) {
  std::ostringstream out;
  emit_svg(scene, out, opt);
  return out.str();
}

}  // namespace hammock
