#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hammock/dataset.hpp"
#include "hammock/error.hpp"
#include "hammock/order.hpp"
#include "hammock/render.hpp"
#include "hammock/spec.hpp"

namespace hammock::cli {

// One --hival token before it is resolved against the highlight column.
struct HivalToken {
  enum class Kind { equals, greater, less, missing, label };
  Kind kind = Kind::missing;
  std::string text;
  double number = 0;
};

// Grammar: "missing" or ".", ">N", "<N", "=V" or a bare number, or label text.
inline HivalToken parse_hival(const std::string& raw) {
  std::string_view s = detail::trim(raw);
  if (s.empty()) throw usage_error("malformed hival '" + raw + "': empty predicate");
  HivalToken t;
  t.text = std::string(s);
  if (s == "missing" || s == ".") {
    t.kind = HivalToken::Kind::missing;
    return t;
  }
  if (s.front() == '>' || s.front() == '<') {
    auto v = detail::parse_double(s.substr(1));
    if (!v || !std::isfinite(*v)) throw usage_error("malformed hival '" + raw + "': expected a number after '" + s.front() + "'");
    t.kind = s.front() == '>' ? HivalToken::Kind::greater : HivalToken::Kind::less;
    t.number = *v;
    return t;
  }
  std::string_view body = s.front() == '=' ? detail::trim(s.substr(1)) : s;
  if (body.empty()) throw usage_error("malformed hival '" + raw + "': nothing after '='");
  if (body.size() >= 2 && body.front() == '"' && body.back() == '"') body = body.substr(1, body.size() - 2);
  t.text = std::string(body);
  if (auto v = detail::parse_double(body); v && std::isfinite(*v)) {
    t.kind = HivalToken::Kind::equals;
    t.number = *v;
  } else {
    t.kind = HivalToken::Kind::label;
  }
  return t;
}

// Numbers compare against numeric values or category codes; label text is
// looked up in the column's value labels.
inline RowPredicate resolve_hival(const HivalToken& t, const Column& col) {
  auto mismatch = [&](const std::string& what) {
    return data_error("dataset", "hival '" + t.text + "' " + what + " but '" + col.name + "' is " +
                                     to_string(col.kind));
  };
  switch (t.kind) {
    case HivalToken::Kind::missing: return RowPredicate::missing();
    case HivalToken::Kind::greater:
    case HivalToken::Kind::less:
      if (col.kind != ColumnKind::numeric) throw mismatch("is a numeric comparison");
      return t.kind == HivalToken::Kind::greater ? RowPredicate::greater(t.number) : RowPredicate::less(t.number);
    case HivalToken::Kind::equals:
      if (col.kind == ColumnKind::numeric) return RowPredicate::equals_number(t.number);
      if (t.number != std::floor(t.number)) throw mismatch("is not an integer code");
      return RowPredicate::equals_code(static_cast<std::int64_t>(t.number));
    case HivalToken::Kind::label:
      if (col.kind != ColumnKind::categorical) throw mismatch("is label text");
      for (const auto& [code, label] : col.value_labels)
        if (label == t.text) return RowPredicate::equals_code(code);
      throw data_error("dataset", "no category of '" + col.name + "' is labeled '" + t.text + "'");
  }
  throw usage_error("unhandled hival");
}

inline Annotation parse_annotation(const std::string& raw) {
  std::istringstream in(raw);
  std::string ys, xs;
  if (!(in >> ys >> xs)) throw usage_error("malformed text '" + raw + "': expected 'Y X TEXT'");
  auto y = detail::parse_double(ys);
  auto x = detail::parse_double(xs);
  if (!y || !x) throw usage_error("malformed text '" + raw + "': expected numeric Y and X");
  std::string rest;
  std::getline(in, rest);
  std::string_view text = detail::trim(rest);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
  return {*y, *x, std::string(text)};
}

inline std::vector<std::string> split_list(const std::string& s, bool spaces_too = true) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto t = detail::trim(cur);
    if (!t.empty()) out.emplace_back(t);
    cur.clear();
  };
  for (char c : s) {
    if (c == ',' || (spaces_too && (c == ' ' || c == '\t')))
      flush();
    else
      cur.push_back(c);
  }
  flush();
  return out;
}

// Raw plot options: unset fields fall back to the spec file, then to the
// PlotSpec defaults.
struct PlotOptions {
  std::optional<std::vector<std::string>> varlist;
  std::optional<bool> missing;
  std::optional<std::string> hivar;
  std::optional<std::vector<HivalToken>> hivals;
  std::optional<std::vector<std::string>> colorlist;
  std::optional<std::string> color;
  std::optional<double> barwidth;
  std::optional<int> minbarfreq;
  std::optional<double> uni_fraction;
  std::optional<double> space;
  std::optional<std::vector<std::string>> samescale;
  std::optional<ConnectorShape> shape;
  std::optional<bool> nolabel;
  std::optional<bool> nounibar;
  std::optional<std::string> label_format;
  std::optional<std::vector<Annotation>> annotations;
  std::optional<std::vector<double>> ylines;
  std::optional<std::map<std::string, std::vector<std::int64_t>>> category_order;
  std::optional<double> width;
  std::optional<double> height;
  std::optional<double> label_size;
};

inline ConnectorShape parse_shape(const std::string& s) {
  if (s == "rectangle") return ConnectorShape::rectangle;
  if (s == "parallelogram") return ConnectorShape::parallelogram;
  throw usage_error("unknown shape '" + s + "' (expected rectangle or parallelogram)");
}

// Reads a --spec JSON file; keys mirror the PlotSpec field names.
inline PlotOptions options_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw usage_error("spec file must hold a JSON object");
  static const std::set<std::string> known{
      "varlist", "missing", "hivar", "hivals", "colorlist", "color", "barwidth", "minbarfreq", "uni_fraction",
      "space", "samescale", "shape", "nolabel", "nounibar", "label_format", "annotations", "ylines",
      "category_order", "canvas", "label_size"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw usage_error("unknown spec file key '" + k + "'");
  PlotOptions o;
  try {
    if (j.contains("varlist")) o.varlist = j["varlist"].get<std::vector<std::string>>();
    if (j.contains("missing")) o.missing = j["missing"].get<bool>();
    if (j.contains("hivar")) o.hivar = j["hivar"].get<std::string>();
    if (j.contains("hivals")) {
      std::vector<HivalToken> hv;
      for (const auto& h : j["hivals"]) hv.push_back(parse_hival(h.is_string() ? h.get<std::string>() : h.dump()));
      o.hivals = hv;
    }
    if (j.contains("colorlist")) o.colorlist = j["colorlist"].get<std::vector<std::string>>();
    if (j.contains("color")) o.color = j["color"].get<std::string>();
    if (j.contains("barwidth")) o.barwidth = j["barwidth"].get<double>();
    if (j.contains("minbarfreq")) o.minbarfreq = j["minbarfreq"].get<int>();
    if (j.contains("uni_fraction")) o.uni_fraction = j["uni_fraction"].get<double>();
    if (j.contains("space")) o.space = j["space"].get<double>();
    if (j.contains("samescale")) {
      if (j["samescale"].is_string())
        o.samescale = split_list(j["samescale"].get<std::string>());
      else
        o.samescale = j["samescale"].get<std::vector<std::string>>();
    }
    if (j.contains("shape")) o.shape = parse_shape(j["shape"].get<std::string>());
    if (j.contains("nolabel")) o.nolabel = j["nolabel"].get<bool>();
    if (j.contains("nounibar")) o.nounibar = j["nounibar"].get<bool>();
    if (j.contains("label_format")) o.label_format = j["label_format"].get<std::string>();
    if (j.contains("annotations")) {
      std::vector<Annotation> a;
      for (const auto& e : j["annotations"])
        a.push_back({e.at("y").get<double>(), e.at("x").get<double>(), e.at("text").get<std::string>()});
      o.annotations = a;
    }
    if (j.contains("ylines")) o.ylines = j["ylines"].get<std::vector<double>>();
    if (j.contains("category_order"))
      o.category_order = j["category_order"].get<std::map<std::string, std::vector<std::int64_t>>>();
    if (j.contains("canvas")) {
      if (j["canvas"].contains("width")) o.width = j["canvas"]["width"].get<double>();
      if (j["canvas"].contains("height")) o.height = j["canvas"]["height"].get<double>();
    }
    if (j.contains("label_size")) o.label_size = j["label_size"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw usage_error(std::string("bad spec file value: ") + e.what());
  }
  return o;
}

// Fields set in `top` win over `base`.
inline PlotOptions overlay(PlotOptions base, const PlotOptions& top) {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.varlist, top.varlist);
  take(base.missing, top.missing);
  take(base.hivar, top.hivar);
  take(base.hivals, top.hivals);
  take(base.colorlist, top.colorlist);
  take(base.color, top.color);
  take(base.barwidth, top.barwidth);
  take(base.minbarfreq, top.minbarfreq);
  take(base.uni_fraction, top.uni_fraction);
  take(base.space, top.space);
  take(base.samescale, top.samescale);
  take(base.shape, top.shape);
  take(base.nolabel, top.nolabel);
  take(base.nounibar, top.nounibar);
  take(base.label_format, top.label_format);
  take(base.annotations, top.annotations);
  take(base.ylines, top.ylines);
  take(base.category_order, top.category_order);
  take(base.width, top.width);
  take(base.height, top.height);
  take(base.label_size, top.label_size);
  return base;
}

// Resolves raw options against the dataset (hival labels, samescale "all").
inline PlotSpec to_plot_spec(const PlotOptions& o, const Dataset& ds) {
  PlotSpec s;
  if (!o.varlist || o.varlist->empty()) throw usage_error("plot needs --vars");
  s.varlist = *o.varlist;
  s.missing = o.missing.value_or(false);
  s.hivar = o.hivar;
  if (o.hivals) {
    if (!s.hivar) throw usage_error("--hival requires --hivar");
    const Column& hv = ds.at(*s.hivar);
    for (const auto& t : *o.hivals) s.hivals.push_back(resolve_hival(t, hv));
  }
  if (o.colorlist) s.colorlist = *o.colorlist;
  if (o.color) {
    if (s.colorlist.empty()) {
      std::size_t n = 1 + s.hivals.size();
      s.colorlist.assign(default_colorlist().begin(),
                         default_colorlist().begin() + static_cast<long>(std::min(n, default_colorlist().size())));
    }
    s.colorlist[0] = *o.color;
  }
  s.barwidth = o.barwidth.value_or(s.barwidth);
  s.minbarfreq = o.minbarfreq.value_or(s.minbarfreq);
  s.uni_fraction = o.uni_fraction.value_or(s.uni_fraction);
  s.space = o.space.value_or(s.space);
  if (o.samescale) {
    if (o.samescale->size() == 1 && (*o.samescale)[0] == "all")
      s.samescale = s.varlist;
    else
      s.samescale = *o.samescale;
  }
  s.shape = o.shape.value_or(s.shape);
  s.nolabel = o.nolabel.value_or(false);
  s.nounibar = o.nounibar.value_or(false);
  s.label_format = o.label_format.value_or(s.label_format);
  if (o.annotations) s.annotations = *o.annotations;
  if (o.ylines) s.ylines = *o.ylines;
  if (o.category_order) s.category_order = *o.category_order;
  s.canvas.width = o.width.value_or(s.canvas.width);
  s.canvas.height = o.height.value_or(s.canvas.height);
  s.label_size = o.label_size.value_or(s.label_size);
  return s;
}

enum class Subcommand { none, plot, order };

struct Invocation {
  Subcommand command = Subcommand::none;
  std::string input;
  std::optional<std::string> labels_path;
  std::optional<std::string> output_path;
  std::optional<std::string> spec_path;
  std::map<std::string, ColumnKind> type_hints;
  std::optional<std::set<std::string>> missing_tokens;
  PlotOptions plot;
  // order
  std::vector<std::string> order_vars;
  std::string start;
  OrderMode mode = OrderMode::max_corr;

  std::optional<std::string> help_text;  // set when --help was requested
};

inline std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw usage_error(std::string("malformed ") + flag + " '" + s + "': expected NAME=VALUE");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

inline Invocation parse_args(int argc, const char* const* argv) {
  CLI::App app{"Hammock plots for mixed categorical and numerical data", "hammock"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  Invocation inv;
  std::vector<std::string> hints, tokens;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", inv.input, "CSV file with a header row")->required();
    sub->add_option("--labels", inv.labels_path, "JSON label map {column: {label, values}}");
    sub->add_option("--type", hints, "Force a column kind: NAME=numeric|categorical (repeatable)");
    sub->add_option("--missing-token", tokens, "Token read as missing (repeatable; replaces the defaults \"\" and \".\")");
  };

  // plot
  CLI::App* plot = app.add_subcommand("plot", "Render a hammock plot to SVG");
  add_common(plot);
  std::string vars, hivar, colorlist_raw, color, samescale, shape, label_format;
  std::vector<std::string> hivals_raw, colors_raw, texts, ylines_raw, cat_orders;
  double barwidth = 1, uni_fraction = 0.5, space = 0.2, width = 1000, height = 600, label_size = 10;
  int minbarfreq = 1;
  plot->add_option("-o,--output", inv.output_path, "Output SVG path (default: standard output)");
  plot->add_option("--spec", inv.spec_path, "JSON file with plot options; flags override it");
  auto* o_vars = plot->add_option("--vars", vars, "Comma-separated variables, one axis each");
  auto* o_missing = plot->add_flag("--missing", "Reserve a band at the bottom for missing values");
  auto* o_hivar = plot->add_option("--hivar", hivar, "Variable used for highlighting");
  auto* o_hival = plot->add_option("--hival", hivals_raw, "Highlight predicate: =V, V, >N, <N, missing, or label text (repeatable)");
  auto* o_colors = plot->add_option("--colorlist", colors_raw, "Comma-separated colors: default first, then one per hival (repeatable)");
  auto* o_color = plot->add_option("--color", color, "Default color");
  auto* o_barwidth = plot->add_option("--barwidth", barwidth, "Connector width multiplier");
  auto* o_minbar = plot->add_option("--minbarfreq", minbarfreq, "Draw smaller connectors as if they held this many rows");
  auto* o_uni = plot->add_option("--uni-fraction,--uni_fraction", uni_fraction, "Fraction of each axis covered by bars");
  auto* o_space = plot->add_option("--space", space, "Fraction of the axis gap used by univariate bars");
  auto* o_same = plot->add_option("--samescale", samescale, "Comma-separated variables sharing one scale, or 'all'");
  auto* o_shape = plot->add_option("--shape", shape, "Connector shape: rectangle or parallelogram");
  auto* o_nolabel = plot->add_flag("--nolabel", "Omit labels");
  auto* o_nounibar = plot->add_flag("--nounibar", "Omit univariate bars");
  auto* o_fmt = plot->add_option("--label-format,--label_format", label_format, "Numeric label format, e.g. %8.0g");
  auto* o_text = plot->add_option("--text", texts, "Annotation 'Y X TEXT' in canonical coordinates (repeatable)");
  auto* o_yline = plot->add_option("--yline", ylines_raw, "Dashed horizontal line(s) at canonical y (repeatable)");
  auto* o_cat = plot->add_option("--category-order", cat_orders, "Category order bottom to top: VAR=c1,c2,... (repeatable)");
  auto* o_width = plot->add_option("--width", width, "Canvas width");
  auto* o_height = plot->add_option("--height", height, "Canvas height");
  auto* o_lsize = plot->add_option("--label-size", label_size, "Label font size");

  // order
  CLI::App* order = app.add_subcommand("order", "Print a greedy correlation-based variable order");
  add_common(order);
  std::string order_vars, mode = "max";
  order->add_option("--vars", order_vars, "Comma-separated candidate variables")->required();
  order->add_option("--start", inv.start, "First variable")->required();
  order->add_option("--mode", mode, "max: maximize |corr| with the previous variable; min: minimize corr^2")
      ->check(CLI::IsMember({"max", "min"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    inv.help_text = app.help();
    for (auto* sub : {plot, order})
      if (sub->parsed()) inv.help_text = sub->help();
    return inv;
  } catch (const CLI::CallForAllHelp&) {
    inv.help_text = app.help("", CLI::AppFormatMode::All);
    return inv;
  } catch (const CLI::ParseError& e) {
    throw usage_error(e.what());
  }

  for (const auto& h : hints) {
    auto [name, kind] = split_assignment(h, "--type");
    if (kind == "numeric")
      inv.type_hints[name] = ColumnKind::numeric;
    else if (kind == "categorical")
      inv.type_hints[name] = ColumnKind::categorical;
    else
      throw usage_error("malformed --type '" + h + "': kind must be numeric or categorical");
  }
  if (!tokens.empty()) inv.missing_tokens = std::set<std::string>(tokens.begin(), tokens.end());

  if (order->parsed()) {
    inv.command = Subcommand::order;
    inv.order_vars = split_list(order_vars);
    inv.mode = mode == "min" ? OrderMode::min_sq_corr : OrderMode::max_corr;
    return inv;
  }

  inv.command = Subcommand::plot;
  PlotOptions& o = inv.plot;
  if (o_vars->count()) o.varlist = split_list(vars);
  if (o_missing->count()) o.missing = true;
  if (o_hivar->count()) o.hivar = hivar;
  if (o_hival->count()) {
    std::vector<HivalToken> hv;
    for (const auto& h : hivals_raw) hv.push_back(parse_hival(h));
    o.hivals = hv;
  }
  if (o_colors->count()) {
    std::vector<std::string> cl;
    for (const auto& c : colors_raw)
      for (auto& part : split_list(c, false)) cl.push_back(part);
    o.colorlist = cl;
  }
  if (o_color->count()) o.color = color;
  if (o_barwidth->count()) o.barwidth = barwidth;
  if (o_minbar->count()) o.minbarfreq = minbarfreq;
  if (o_uni->count()) o.uni_fraction = uni_fraction;
  if (o_space->count()) o.space = space;
  if (o_same->count()) o.samescale = split_list(samescale);
  if (o_shape->count()) o.shape = parse_shape(shape);
  if (o_nolabel->count()) o.nolabel = true;
  if (o_nounibar->count()) o.nounibar = true;
  if (o_fmt->count()) {
    try {
      NumberFormat::parse(label_format);
    } catch (const Error& e) {
      throw usage_error(e.what());
    }
    o.label_format = label_format;
  }
  if (o_text->count()) {
    std::vector<Annotation> a;
    for (const auto& t : texts) a.push_back(parse_annotation(t));
    o.annotations = a;
  }
  if (o_yline->count()) {
    std::vector<double> ys;
    for (const auto& raw : ylines_raw)
      for (const auto& part : split_list(raw)) {
        auto v = detail::parse_double(part);
        if (!v) throw usage_error("malformed --yline value '" + part + "'");
        ys.push_back(*v);
      }
    o.ylines = ys;
  }
  if (o_cat->count()) {
    std::map<std::string, std::vector<std::int64_t>> orders;
    for (const auto& c : cat_orders) {
      auto [name, list] = split_assignment(c, "--category-order");
      std::vector<std::int64_t> codes;
      for (const auto& part : split_list(list)) {
        auto v = detail::parse_int(part);
        if (!v) throw usage_error("malformed --category-order code '" + part + "'");
        codes.push_back(*v);
      }
      orders[name] = codes;
    }
    o.category_order = orders;
  }
  if (o_width->count()) o.width = width;
  if (o_height->count()) o.height = height;
  if (o_lsize->count()) o.label_size = label_size;
  return inv;
}

inline Invocation parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"hammock"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

inline Dataset load_input(const Invocation& inv) {
  LoadOptions lo;
  lo.type_hints = inv.type_hints;
  if (inv.missing_tokens) lo.missing_tokens = *inv.missing_tokens;
  Dataset ds = load_csv(inv.input, lo);
  if (inv.labels_path) ds = apply_label_map(std::move(ds), *inv.labels_path);
  return ds;
}

// Resolves the full PlotSpec for a plot invocation: spec file, then flags.
inline PlotSpec resolve_plot_spec(const Invocation& inv, const Dataset& ds) {
  PlotOptions opts;
  if (inv.spec_path) {
    std::ifstream in(*inv.spec_path);
    if (!in) throw usage_error("cannot read spec file '" + *inv.spec_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw usage_error("malformed spec file '" + *inv.spec_path + "': " + e.what());
    }
    opts = options_from_json(j);
  }
  return to_plot_spec(overlay(opts, inv.plot), ds);
}

// Runs a parsed invocation. Returns the process exit status.
inline int run(const Invocation& inv, std::ostream& out, std::ostream& diag) {
  if (inv.help_text) {
    out << *inv.help_text;
    return 0;
  }
  try {
    Dataset ds = load_input(inv);

    if (inv.command == Subcommand::order) {
      auto names = greedy_order(ds, inv.order_vars, inv.start, inv.mode);
      for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
      out << '\n';
      return 0;
    }

    PlotSpec spec = resolve_plot_spec(inv, ds);
    if (spec.nounibar && spec.space == 1.0)
      diag << "hammock: warning: nounibar with space = 1 leaves nothing to draw on the axes\n";
    if (spec.hivar) {
      const Column& hv = ds.at(*spec.hivar);
      for (std::size_t i = 0; i < spec.hivals.size(); ++i) {
        if (select_rows(hv, spec.hivals[i]).empty())
          diag << "hammock: warning: hival '" << spec.hivals[i].describe() << "' matches no rows of '" << hv.name
               << "'\n";
      }
    }

    Plot plot = render_plot(ds, spec);
    SvgOptions svg;
    const char* no_color = std::getenv("HAMMOCK_NO_COLOR");
    svg.strip_opacity = no_color && *no_color;
    if (inv.output_path) {
      std::ofstream file(*inv.output_path, std::ios::binary);
      if (!file) throw render_error("cannot open '" + *inv.output_path + "' for writing");
      emit_svg(plot.scene, file, svg);
      file.flush();
      if (!file) throw render_error("failed writing '" + *inv.output_path + "'");
    } else {
      emit_svg(plot.scene, out, svg);
    }
    return 0;
  } catch (const Error& e) {
    diag << "hammock: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    diag << "hammock: internal: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::render);
  }
}

// parse + run with usage errors mapped to exit status 1.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& diag = std::cerr) {
  Invocation inv;
  try {
    inv = parse_args(argc, argv);
  } catch (const Error& e) {
    diag << "hammock: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  }
  return run(inv, out, diag);
}

}  // namespace hammock::cli
