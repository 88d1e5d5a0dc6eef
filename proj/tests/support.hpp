#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hammock/dataset.hpp"

namespace hammock::testing {

inline std::string data_path(const std::string& name) { return std::string(HAMMOCK_DATA_DIR) + "/" + name; }

// Splits a fixture file into raw string cells without going through the
// library's CSV reader (fixtures contain no quoted fields).
inline std::vector<std::vector<std::string>> raw_rows(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

inline std::size_t raw_column(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
  for (std::size_t j = 0; j < rows[0].size(); ++j)
    if (rows[0][j] == name) return j;
  return rows[0].size();
}

// Random small table: numeric columns draw from a few integer levels so that
// ties occur, categorical columns use 2-4 codes; about 10% of cells missing.
inline Dataset random_dataset(std::mt19937& rng, std::size_t max_rows = 50, std::size_t max_cols = 6,
                              double missing_rate = 0.1) {
  std::uniform_int_distribution<std::size_t> nrows(2, max_rows), ncols(2, max_cols);
  std::size_t n = nrows(rng), k = ncols(rng);
  std::bernoulli_distribution miss(missing_rate), categorical(0.4);
  std::vector<Column> cols;
  for (std::size_t j = 0; j < k; ++j) {
    Column c;
    c.name = "v" + std::to_string(j);
    c.kind = categorical(rng) ? ColumnKind::categorical : ColumnKind::numeric;
    std::uniform_int_distribution<int> levels(c.kind == ColumnKind::categorical ? 2 : 3,
                                              c.kind == ColumnKind::categorical ? 4 : 12);
    int m = levels(rng);
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (miss(rng)) {
        c.cells.push_back(CellValue::missing());
      } else if (c.kind == ColumnKind::categorical) {
        c.cells.push_back(CellValue::code(pick(rng)));
      } else {
        c.cells.push_back(CellValue::number(1.5 * pick(rng) - 2.0));
      }
    }
    // Keep at least one observed value per column.
    if (c.missing_count() == n)
      c.cells[0] = c.kind == ColumnKind::categorical ? CellValue::code(0) : CellValue::number(1.0);
    cols.push_back(std::move(c));
  }
  return Dataset(std::move(cols));
}

// Textbook Pearson on the complete pairs (NaN = missing), from raw sums.
inline double oracle_corr(const std::vector<double>& a, const std::vector<double>& b) {
  double n = 0, sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    n += 1;
    sa += a[i];
    sb += b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
    sab += a[i] * b[i];
  }
  return (n * sab - sa * sb) / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
}

// Among all orderings that begin with `start` and take a best remaining
// neighbor at every step, the one that is lexicographically first by
// position in the variable list.
inline std::vector<std::size_t> brute_force_order(const std::vector<std::vector<double>>& cols, std::size_t start,
                                                  bool max_mode) {
  std::vector<std::size_t> perm(cols.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best;
  do {
    if (perm[0] != start) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i + 1 < perm.size(); ++i) {
      double chosen = oracle_corr(cols[perm[i]], cols[perm[i + 1]]);
      double chosen_score = max_mode ? std::fabs(chosen) : -chosen * chosen;
      for (std::size_t j = i + 2; j < perm.size(); ++j) {
        double r = oracle_corr(cols[perm[i]], cols[perm[j]]);
        double score = max_mode ? std::fabs(r) : -r * r;
        if (score > chosen_score || (score == chosen_score && perm[j] < perm[i + 1])) ok = false;
      }
    }
    if (ok && (best.empty() || perm < best)) best = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline Column numeric_column(std::string name, const std::vector<double>& values) {
  Column c;
  c.name = std::move(name);
  for (double v : values) c.cells.push_back(std::isnan(v) ? CellValue::missing() : CellValue::number(v));
  return c;
}

}  // namespace hammock::testing
