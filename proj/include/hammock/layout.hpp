#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hammock/dataset.hpp"
#include "hammock/error.hpp"
#include "hammock/format.hpp"
#include "hammock/spec.hpp"
#include "hammock/strata.hpp"

namespace hammock {

// Bars thinner than this (canonical y units) are drawn at this thickness so
// values that occur once still show up as a hairline.
inline constexpr double kMinBarThickness = 0.15;

// Canonical vertical space is [0,100]. With missing values enabled the bottom
// 8 units hold the missing category and (8,12) is left as a gap.
inline constexpr double kMissingRegionTop = 8.0;
inline constexpr double kDataRegionBottomWithMissing = 12.0;

struct Region {
  double lo = 0;
  double hi = 100;

  double height() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double y) const { return y >= lo && y <= hi; }
  friend bool operator==(const Region&, const Region&) = default;
};

struct Regions {
  Region data;
  std::optional<Region> missing;
};

inline Regions canonical_regions(bool missing) {
  if (!missing) return {Region{0, 100}, std::nullopt};
  return {Region{kDataRegionBottomWithMissing, 100}, Region{0, kMissingRegionTop}};
}

inline Regions canonical_regions(const PlotSpec& spec) { return canonical_regions(spec.missing); }

// ---------------------------------------------------------------------------
// Scales
// ---------------------------------------------------------------------------

struct LinearScale {
  double vmin = 0;
  double vmax = 1;
  Region region;

  double operator()(double v) const {
    if (vmax == vmin) return region.mid();
    return region.lo + (v - vmin) / (vmax - vmin) * region.height();
  }
};

// Linear value->y map over the column, or over the union of a samescale group.
inline LinearScale compute_scale(const Column& col, std::span<const Column* const> group, Region region) {
  auto check = [](const Column& c) {
    if (c.kind != ColumnKind::numeric)
      throw data_error("layout", "cannot build a linear scale for categorical column '" + c.name + "'");
  };
  check(col);
  bool any = false;
  double lo = 0, hi = 0;
  auto scan = [&](const Column& c) {
    for (const auto& cell : c.cells) {
      if (cell.is_missing()) continue;
      double v = cell.as_number();
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  };
  scan(col);
  if (!any) throw data_error("layout", "column '" + col.name + "' has no non-missing values");
  for (const Column* g : group) {
    check(*g);
    scan(*g);
  }
  return {lo, hi, region};
}

inline LinearScale compute_scale(const Column& col, Region region) {
  return compute_scale(col, std::span<const Column* const>{}, region);
}

// Equal-height slots over the region, bottom to top, in code order or in the
// given permutation. Returns code -> slot center.
inline std::map<std::int64_t, double> place_categories(const Column& col, const std::vector<std::int64_t>* order,
                                                       Region region) {
  if (col.kind != ColumnKind::categorical)
    throw data_error("layout", "cannot place categories of numeric column '" + col.name + "'");
  std::set<std::int64_t> observed;
  for (const auto& c : col.cells)
    if (c.is_code()) observed.insert(c.as_code());
  if (observed.empty()) throw data_error("layout", "column '" + col.name + "' has no non-missing values");

  std::vector<std::int64_t> seq(observed.begin(), observed.end());
  if (order) {
    std::set<std::int64_t> given(order->begin(), order->end());
    if (given.size() != order->size() || given != observed)
      throw data_error("layout", "category order for '" + col.name + "' is not a permutation of its observed codes");
    seq = *order;
  }
  std::map<std::int64_t, double> centers;
  double slot = region.height() / static_cast<double>(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) centers[seq[i]] = region.lo + (static_cast<double>(i) + 0.5) * slot;
  return centers;
}

class AxisScale {
 public:
  AxisScale(LinearScale s) : scale_(s) {}
  AxisScale(std::map<std::int64_t, double> slots) : scale_(std::move(slots)) {}

  bool is_linear() const { return std::holds_alternative<LinearScale>(scale_); }
  const LinearScale& linear() const { return std::get<LinearScale>(scale_); }
  const std::map<std::int64_t, double>& slots() const { return std::get<std::map<std::int64_t, double>>(scale_); }

  double y(const CellValue& v) const {
    if (is_linear()) return linear()(v.as_number());
    return slots().at(v.as_code());
  }

 private:
  std::variant<LinearScale, std::map<std::int64_t, double>> scale_;
};

// ---------------------------------------------------------------------------
// Axes
// ---------------------------------------------------------------------------

struct ValueBand {
  CellValue key;
  double y_center = 0;
  std::size_t count = 0;
  double bar_height = 0;
  bool floored = false;
  std::string text;
  std::vector<std::size_t> rows;
  std::vector<Stratum> strata;
};

struct AxisLayout {
  std::string var;
  std::string label;
  int x_index = 1;
  ColumnKind kind = ColumnKind::numeric;
  AxisScale scale{LinearScale{}};
  Region data_region;
  std::vector<ValueBand> bands;
  std::optional<ValueBand> missing_band;
  double unit = 0;  // bar height per observation

  std::size_t total_count() const {
    std::size_t n = missing_band ? missing_band->count : 0;
    for (const auto& b : bands) n += b.count;
    return n;
  }

  const ValueBand* find(const CellValue& key) const {
    if (key.is_missing()) return missing_band ? &*missing_band : nullptr;
    for (const auto& b : bands)
      if (b.key == key) return &b;
    return nullptr;
  }
};

inline std::string band_text(const Column& col, const CellValue& key, const NumberFormat& fmt) {
  if (key.is_missing()) return "missing";
  if (key.is_code()) return col.code_label(key.as_code());
  return fmt(key.as_number());
}

// One band per distinct non-missing value plus an optional missing band.
// Heights share one per-observation unit so that all bars on the axis fill
// uni_fraction of the data region.
inline AxisLayout build_axis(const Column& col, const PlotSpec& spec, int x_index, const AxisScale& scale,
                             const Regions& regions, const Column* hivar = nullptr) {
  AxisLayout axis;
  axis.var = col.name;
  axis.label = col.label;
  axis.x_index = x_index;
  axis.kind = col.kind;
  axis.scale = scale;
  axis.data_region = regions.data;
  NumberFormat fmt = NumberFormat::parse(spec.label_format);

  std::map<CellValue, std::vector<std::size_t>> groups;
  std::vector<std::size_t> missing_rows;
  for (std::size_t i = 0; i < col.cells.size(); ++i) {
    if (col.cells[i].is_missing())
      missing_rows.push_back(i);
    else
      groups[col.cells[i]].push_back(i);
  }

  for (auto& [key, rows] : groups) {
    ValueBand b;
    b.key = key;
    b.y_center = scale.y(key);
    b.count = rows.size();
    b.text = band_text(col, key, fmt);
    b.rows = std::move(rows);
    axis.bands.push_back(std::move(b));
  }
  std::stable_sort(axis.bands.begin(), axis.bands.end(),
                   [](const ValueBand& a, const ValueBand& b) { return a.y_center < b.y_center; });

  if (spec.missing && regions.missing && !missing_rows.empty()) {
    ValueBand m;
    m.y_center = regions.missing->mid();
    m.count = missing_rows.size();
    m.text = "missing";
    m.rows = std::move(missing_rows);
    axis.missing_band = std::move(m);
  }

  std::size_t total = axis.total_count();
  axis.unit = total ? spec.uni_fraction * regions.data.height() / static_cast<double>(total) : 0.0;
  std::span<const RowPredicate> hivals(spec.hivals);
  auto finish = [&](ValueBand& b) {
    b.bar_height = static_cast<double>(b.count) * axis.unit;
    if (b.bar_height < kMinBarThickness) {
      b.bar_height = kMinBarThickness;
      b.floored = true;
    }
    b.strata = stratify(b.rows, hivar, hivals);
  };
  for (auto& b : axis.bands) finish(b);
  if (axis.missing_band) finish(*axis.missing_band);
  return axis;
}

// Scales for every plotted variable; samescale members share one range.
inline std::vector<AxisScale> compute_scales(const Dataset& ds, const PlotSpec& spec) {
  Regions regions = canonical_regions(spec);
  std::vector<const Column*> group;
  for (const auto& v : spec.samescale) group.push_back(&ds.at(v));

  std::vector<AxisScale> scales;
  for (const auto& var : spec.varlist) {
    const Column& col = ds.at(var);
    if (col.kind == ColumnKind::categorical) {
      auto it = spec.category_order.find(var);
      scales.emplace_back(place_categories(col, it != spec.category_order.end() ? &it->second : nullptr, regions.data));
    } else if (std::find(spec.samescale.begin(), spec.samescale.end(), var) != spec.samescale.end()) {
      scales.emplace_back(compute_scale(col, group, regions.data));
    } else {
      scales.emplace_back(compute_scale(col, regions.data));
    }
  }
  return scales;
}

// Expects a validated spec.
inline std::vector<AxisLayout> build_layouts(const Dataset& ds, const PlotSpec& spec) {
  Regions regions = canonical_regions(spec);
  std::vector<AxisScale> scales = compute_scales(ds, spec);
  const Column* hivar = spec.hivar ? &ds.at(*spec.hivar) : nullptr;
  std::vector<AxisLayout> axes;
  for (std::size_t i = 0; i < spec.varlist.size(); ++i)
    axes.push_back(build_axis(ds.at(spec.varlist[i]), spec, static_cast<int>(i + 1), scales[i], regions, hivar));
  return axes;
}

// ---------------------------------------------------------------------------
// Horizontal placement
// ---------------------------------------------------------------------------

struct AxisGeometry {
  double x_center = 1;
  double bar_half_width = 0;
  double connector_span = 0;  // length of the connector span to the next axis; 0 for the last axis

  double left_edge() const { return x_center - bar_half_width; }
  double right_edge() const { return x_center + bar_half_width; }
};

// Axes sit at canonical x = 1..k with unit gaps. Each univariate region takes
// a fraction `space` of the gap; connectors fill the rest.
inline std::vector<AxisGeometry> axis_x_positions(int k, double space) {
  if (k < 1) throw data_error("layout", "need at least one axis");
  if (k < 2 && space != 1.0) throw data_error("layout", "need at least two axes unless space = 1");
  if (!(space >= 0 && space <= 1)) throw data_error("layout", "space must lie in [0,1]");
  constexpr double gap = 1.0;
  std::vector<AxisGeometry> out;
  for (int i = 1; i <= k; ++i) {
    AxisGeometry g;
    g.x_center = static_cast<double>(i);
    g.bar_half_width = space * gap / 2.0;
    g.connector_span = i < k ? gap - 2.0 * g.bar_half_width : 0.0;
    out.push_back(g);
  }
  return out;
}

}  // namespace hammock
