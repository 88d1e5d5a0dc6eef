#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hammock/dataset.hpp"
#include "hammock/error.hpp"

namespace hammock {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  double opacity = 1.0;

  std::string hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
  }

  friend bool operator==(const Color&, const Color&) = default;
};

namespace detail {

inline const std::map<std::string, Color, std::less<>>& named_colors() {
  static const std::map<std::string, Color, std::less<>> table = [] {
    std::map<std::string, Color, std::less<>> t{
        {"black", {0, 0, 0}},          {"white", {255, 255, 255}},     {"red", {255, 0, 0}},
        {"green", {0, 128, 0}},        {"blue", {0, 0, 255}},          {"yellow", {255, 255, 0}},
        {"orange", {255, 128, 0}},     {"magenta", {255, 0, 255}},     {"cyan", {0, 255, 255}},
        {"navy", {0, 0, 128}},         {"maroon", {128, 0, 0}},        {"teal", {0, 128, 128}},
        {"purple", {128, 0, 128}},     {"brown", {165, 42, 42}},       {"pink", {255, 192, 203}},
        {"olive", {128, 128, 0}},      {"lime", {0, 255, 0}},          {"gray", {128, 128, 128}},
        {"grey", {128, 128, 128}},     {"ltblue", {173, 216, 230}},    {"dkgreen", {0, 100, 0}},
        {"dkorange", {255, 140, 0}},   {"gold", {255, 215, 0}},        {"emerald", {80, 200, 120}},
        {"sienna", {160, 82, 45}},     {"forest_green", {34, 139, 34}},
    };
    // 16-step grayscale: gs0 is black, gs16 is white.
    for (int i = 0; i <= 16; ++i) {
      auto level = static_cast<std::uint8_t>(std::lround(255.0 * i / 16.0));
      t["gs" + std::to_string(i)] = {level, level, level};
    }
    return t;
  }();
  return table;
}

}  // namespace detail

// Accepts a built-in color name, an "R G B" triple (0-255) or "#rrggbb",
// each optionally followed by "%NN" opacity.
inline Color parse_color(std::string_view text) {
  auto bad = [&](const std::string& why) {
    return data_error("render", "cannot parse color '" + std::string(text) + "': " + why);
  };
  std::string_view s = detail::trim(text);
  double opacity = 1.0;
  if (auto pct = s.rfind('%'); pct != std::string_view::npos) {
    auto v = detail::parse_double(s.substr(pct + 1));
    if (!v || *v < 0 || *v > 100) throw bad("opacity must be a percentage in [0,100]");
    opacity = *v / 100.0;
    s = detail::trim(s.substr(0, pct));
  }
  if (s.empty()) throw bad("empty color");

  Color c;
  if (s.front() == '#') {
    unsigned r = 0, g = 0, b = 0;
    if (s.size() != 7 || std::sscanf(std::string(s).c_str(), "#%2x%2x%2x", &r, &g, &b) != 3)
      throw bad("hex colors take the form #rrggbb");
    c = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
  } else if (std::isdigit(static_cast<unsigned char>(s.front()))) {
    std::istringstream in{std::string(s)};
    std::string tok;
    std::vector<int> parts;
    while (in >> tok) {
      auto v = detail::parse_int(tok);
      if (!v || *v < 0 || *v > 255) throw bad("RGB components must be integers in 0..255");
      parts.push_back(static_cast<int>(*v));
    }
    if (parts.size() != 3) throw bad("RGB colors need exactly three components");
    c = {static_cast<std::uint8_t>(parts[0]), static_cast<std::uint8_t>(parts[1]), static_cast<std::uint8_t>(parts[2])};
  } else {
    std::string name(s);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    auto it = detail::named_colors().find(name);
    if (it == detail::named_colors().end()) throw bad("unknown color name");
    c = it->second;
  }
  c.opacity = opacity;
  return c;
}

// Position 0 is the default color; position i colors the i-th hival.
inline std::vector<Color> resolve_colors(const std::vector<std::string>& colorlist) {
  if (colorlist.empty()) throw data_error("render", "colorlist is empty");
  std::vector<Color> out;
  for (const auto& s : colorlist) out.push_back(parse_color(s));
  return out;
}

}  // namespace hammock
