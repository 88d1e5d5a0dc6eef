#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "hammock/error.hpp"

namespace hammock {

// printf-like numeric label format "%W.D{g|f|e}[c]". A general format with
// D = 0 picks as many significant digits as fit in W characters and falls
// back to scientific notation when the number is too wide.
struct NumberFormat {
  int width = 8;
  int digits = 0;
  char conversion = 'g';
  bool thousands = false;

  static NumberFormat parse(std::string_view text) {
    NumberFormat f;
    std::string_view s = text;
    auto bad = [&] { return data_error("layout", "malformed label format '" + std::string(text) + "'"); };
    if (s.empty() || s.front() != '%') throw bad();
    s.remove_prefix(1);
    while (!s.empty() && (s.front() == '-' || s.front() == '0' || s.front() == '~')) s.remove_prefix(1);
    auto read_int = [&](int& out) {
      bool any = false;
      out = 0;
      while (!s.empty() && s.front() >= '0' && s.front() <= '9') {
        out = out * 10 + (s.front() - '0');
        if (out > 64) throw bad();
        s.remove_prefix(1);
        any = true;
      }
      return any;
    };
    if (!read_int(f.width)) throw bad();
    if (f.width < 1) throw bad();
    if (!s.empty() && s.front() == '.') {
      s.remove_prefix(1);
      if (!read_int(f.digits)) throw bad();
    }
    if (s.empty()) throw bad();
    f.conversion = s.front();
    if (f.conversion != 'g' && f.conversion != 'f' && f.conversion != 'e') throw bad();
    s.remove_prefix(1);
    if (!s.empty() && s.front() == 'c') {
      f.thousands = true;
      s.remove_prefix(1);
    }
    if (!s.empty()) throw bad();
    return f;
  }

  std::string operator()(double v) const {
    std::string out;
    switch (conversion) {
      case 'f': out = printf_string("%.*f", digits, v); break;
      case 'e': out = printf_string("%.*e", digits, v); break;
      default: out = general(v); break;
    }
    if (thousands && out.find('e') == std::string::npos) out = group_thousands(out);
    return out;
  }

 private:
  static std::string printf_string(const char* fmt, int precision, double v) {
    char buf[128];
    int n = std::snprintf(buf, sizeof buf, fmt, precision, v);
    return std::string(buf, static_cast<std::size_t>(n));
  }

  std::string general(double v) const {
    if (digits > 0) return printf_string("%.*g", digits, v);
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
      std::string s = printf_string("%.*f", 0, v);
      if (static_cast<int>(s.size()) <= width) return s == "-0" ? "0" : s;
    }
    std::string s;
    for (int p = width; p >= 1; --p) {
      s = printf_string("%.*g", p, v);
      if (static_cast<int>(s.size()) <= width) return s;
    }
    return s;
  }

  static std::string group_thousands(const std::string& s) {
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    std::size_t end = s.find('.');
    if (end == std::string::npos) end = s.size();
    std::string out = s.substr(0, start);
    std::string_view intpart(s.data() + start, end - start);
    for (std::size_t i = 0; i < intpart.size(); ++i) {
      if (i > 0 && (intpart.size() - i) % 3 == 0) out.push_back(',');
      out.push_back(intpart[i]);
    }
    return out + s.substr(end);
  }
};

}  // namespace hammock
