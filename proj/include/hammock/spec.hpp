#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hammock/dataset.hpp"
#include "hammock/error.hpp"
#include "hammock/format.hpp"

namespace hammock {

enum class ConnectorShape { rectangle, parallelogram };

// Free text placed at canonical coordinates: y in [0,100], x an axis index.
struct Annotation {
  double y = 0;
  double x = 1;
  std::string text;
};

struct Canvas {
  double width = 1000;
  double height = 600;
};

// Default palette when no colorlist is given: gray for the bulk of the data,
// then one color per highlight value.
inline const std::vector<std::string>& default_colorlist() {
  static const std::vector<std::string> colors{"gs10", "orange", "blue", "red", "green", "magenta", "cyan", "brown"};
  return colors;
}

struct PlotSpec {
  std::vector<std::string> varlist;
  bool missing = false;
  std::optional<std::string> hivar;
  std::vector<RowPredicate> hivals;
  std::vector<std::string> colorlist;
  double barwidth = 1.0;
  int minbarfreq = 1;
  double uni_fraction = 0.5;
  double space = 0.2;
  std::vector<std::string> samescale;
  ConnectorShape shape = ConnectorShape::rectangle;
  bool nolabel = false;
  bool nounibar = false;
  std::string label_format = "%8.0g";
  std::vector<Annotation> annotations;
  std::vector<double> ylines;
  std::map<std::string, std::vector<std::int64_t>> category_order;
  Canvas canvas;
  double label_size = 10;
};

// Checks every cross-field invariant against the dataset and fills the
// default colorlist. Throws Error on the first violation.
inline PlotSpec validated(PlotSpec spec, const Dataset& ds) {
  auto fail = [](const std::string& msg) { return data_error("layout", msg); };

  if (spec.varlist.empty()) throw fail("varlist is empty");
  if (spec.varlist.size() < 2 && spec.space != 1.0)
    throw fail("at least two variables are required unless space = 1");
  for (const auto& v : spec.varlist) ds.at(v);

  for (const auto& v : spec.samescale) {
    if (std::find(spec.varlist.begin(), spec.varlist.end(), v) == spec.varlist.end())
      throw fail("samescale variable '" + v + "' is not in varlist");
    if (ds.at(v).kind != ColumnKind::numeric) throw fail("samescale variable '" + v + "' is not numeric");
  }

  if (!(spec.uni_fraction > 0 && spec.uni_fraction <= 1)) throw fail("uni_fraction must lie in (0,1]");
  if (!(spec.space >= 0 && spec.space <= 1)) throw fail("space must lie in [0,1]");
  if (!(spec.barwidth > 0)) throw fail("barwidth must be positive");
  if (spec.minbarfreq < 1) throw fail("minbarfreq must be at least 1");
  if (!(spec.label_size > 0)) throw fail("label size must be positive");
  if (!(spec.canvas.width > 0 && spec.canvas.height > 0)) throw fail("canvas size must be positive");
  NumberFormat::parse(spec.label_format);

  if (spec.hivar) {
    const Column& hv = ds.at(*spec.hivar);
    if (spec.hivals.empty()) throw fail("hivar '" + *spec.hivar + "' given without any hival");
    for (const auto& p : spec.hivals) p.check_kind(hv);
  } else if (!spec.hivals.empty()) {
    throw fail("hival given without hivar");
  }

  std::size_t needed = 1 + (spec.hivar ? spec.hivals.size() : 0);
  if (spec.colorlist.empty()) {
    if (needed > default_colorlist().size())
      throw fail("more highlight values than default colors; pass a colorlist");
    spec.colorlist.assign(default_colorlist().begin(), default_colorlist().begin() + static_cast<long>(needed));
  } else if (spec.colorlist.size() < needed) {
    throw fail("colorlist has " + std::to_string(spec.colorlist.size()) + " colors, need " + std::to_string(needed));
  }

  for (const auto& [var, perm] : spec.category_order) {
    if (std::find(spec.varlist.begin(), spec.varlist.end(), var) == spec.varlist.end())
      throw fail("category order given for '" + var + "', which is not in varlist");
    const Column& col = ds.at(var);
    if (col.kind != ColumnKind::categorical) throw fail("category order given for numeric variable '" + var + "'");
    std::set<std::int64_t> observed;
    for (const auto& c : col.cells)
      if (c.is_code()) observed.insert(c.as_code());
    std::set<std::int64_t> given(perm.begin(), perm.end());
    if (given.size() != perm.size() || given != observed)
      throw fail("category order for '" + var + "' is not a permutation of its observed codes");
  }
  return spec;
}

}  // namespace hammock
