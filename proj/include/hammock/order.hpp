#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hammock/dataset.hpp"
#include "hammock/error.hpp"

namespace hammock {

namespace detail {

inline std::optional<double> try_corr(const Column& a, const Column& b) {
  std::size_t n = 0;
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.cells[i].is_missing() || b.cells[i].is_missing()) continue;
    ++n;
    ma += a.cells[i].numeric();
    mb += b.cells[i].numeric();
  }
  if (n < 2) return std::nullopt;
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.cells[i].is_missing() || b.cells[i].is_missing()) continue;
    double da = a.cells[i].numeric() - ma;
    double db = b.cells[i].numeric() - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0 || sbb <= 0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace detail

// Pearson correlation over rows present in both columns. Categorical columns
// enter through their integer codes.
inline double pairwise_corr(const Column& a, const Column& b) {
  if (a.size() != b.size())
    throw data_error("order", "columns '" + a.name + "' and '" + b.name + "' differ in length");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a.cells[i].is_missing() && !b.cells[i].is_missing()) ++n;
  if (n < 2)
    throw data_error("order", "correlation of '" + a.name + "' and '" + b.name + "' needs at least 2 complete rows");
  auto r = detail::try_corr(a, b);
  if (!r)
    throw data_error("order", "correlation of '" + a.name + "' and '" + b.name + "' is undefined (zero variance)");
  return *r;
}

struct CorrMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<double>>> values;  // nullopt when undefined

  const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i][j]; }
};

inline CorrMatrix corr_matrix(const Dataset& ds, const std::vector<std::string>& vars) {
  CorrMatrix m;
  m.names = vars;
  const std::size_t n = vars.size();
  m.values.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Column& a = ds.at(vars[i]);
    m.values[i][i] = detail::try_corr(a, a) ? std::optional<double>(1.0) : std::nullopt;
    for (std::size_t j = i + 1; j < n; ++j) {
      auto r = detail::try_corr(a, ds.at(vars[j]));
      m.values[i][j] = m.values[j][i] = r;
    }
  }
  return m;
}

enum class OrderMode { max_corr, min_sq_corr };

// Greedy neighbor ordering: start with `start`, then keep appending the unused
// variable with the largest |corr| (or smallest corr^2) to the last one.
// Ties go to the variable listed first in `vars`.
inline std::vector<std::string> greedy_order(const Dataset& ds, const std::vector<std::string>& vars,
                                             const std::string& start, OrderMode mode) {
  auto it = std::find(vars.begin(), vars.end(), start);
  if (it == vars.end()) throw data_error("order", "start variable '" + start + "' is not in the variable list");
  for (const auto& v : vars) ds.at(v);

  CorrMatrix m = corr_matrix(ds, vars);
  std::vector<bool> used(vars.size(), false);
  std::size_t cur = static_cast<std::size_t>(it - vars.begin());
  used[cur] = true;
  std::vector<std::string> out{start};

  while (out.size() < vars.size()) {
    std::size_t best = vars.size();
    double best_score = 0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (used[j]) continue;
      const auto& r = m.at(cur, j);
      if (!r) throw data_error("order", "correlation of '" + vars[cur] + "' and '" + vars[j] + "' is undefined");
      double score = mode == OrderMode::max_corr ? std::fabs(*r) : -(*r * *r);
      if (best == vars.size() || score > best_score) {
        best = j;
        best_score = score;
      }
    }
    used[best] = true;
    cur = best;
    out.push_back(vars[best]);
  }
  return out;
}

}  // namespace hammock
