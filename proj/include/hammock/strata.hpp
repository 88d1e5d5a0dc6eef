#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hammock/dataset.hpp"

namespace hammock {

// Rows of one highlight color inside a bar or connector. color_index 0 is the
// default color; i >= 1 is the i-th hival.
struct Stratum {
  int color_index = 0;
  std::size_t count = 0;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

// Assigns each row to the first matching predicate (or the default color) and
// returns the non-empty strata, default first, then hivals in order.
inline std::vector<Stratum> stratify(std::span<const std::size_t> rows, const Column* hivar,
                                     std::span<const RowPredicate> hivals) {
  if (!hivar || hivals.empty()) {
    if (rows.empty()) return {};
    return {Stratum{0, rows.size()}};
  }
  for (const auto& p : hivals) p.check_kind(*hivar);
  std::vector<std::size_t> counts(hivals.size() + 1, 0);
  for (std::size_t r : rows) {
    std::size_t idx = 0;
    for (std::size_t h = 0; h < hivals.size(); ++h) {
      if (hivals[h].matches(hivar->cells.at(r))) {
        idx = h + 1;
        break;
      }
    }
    ++counts[idx];
  }
  std::vector<Stratum> out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) out.push_back({static_cast<int>(i), counts[i]});
  return out;
}

}  // namespace hammock
