#pragma once

// CSV/JSON/aligned-text rendering of sweep results.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ternary_qec/errors.hpp"
#include "ternary_qec/montecarlo.hpp"

namespace tqec {

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string format_pvalue(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", p);
  return buf;
}

using Table = std::vector<std::vector<std::string>>;  // first row is the header

inline const std::vector<std::string>& table2_columns() {
  static const std::vector<std::string> c{"Nodes", "tau", "StdLER", "RegLER", "Impr",
                                          "pValue", "Abst", "MiscT", "AbstPct"};
  return c;
}

inline const std::vector<std::string>& table3_columns() {
  static const std::vector<std::string> c{"f", "StdLER", "RegLER", "Impr", "Abstains"};
  return c;
}

/// Impr and AbstPct are percentages with one decimal; LERs have four.
inline Table table2(const std::vector<RunSummary>& rows) {
  Table t{table2_columns()};
  for (const auto& s : rows)
    t.push_back({std::to_string(s.nodes), std::to_string(s.tau), format_fixed(s.std_ler, 4),
                 format_fixed(s.reg_ler, 4), format_fixed(100.0 * s.improvement, 1), format_pvalue(s.p_value),
                 std::to_string(s.correct_abstains), std::to_string(s.misc_ternary),
                 format_fixed(100.0 * s.abstain_pct, 1)});
  return t;
}

/// Abstains counts every abstention of the regime decoder, correct or not.
inline Table table3(const std::vector<RunSummary>& rows) {
  Table t{table3_columns()};
  for (const auto& s : rows)
    t.push_back({format_fixed(s.f, 3), format_fixed(s.std_ler, 4), format_fixed(s.reg_ler, 4),
                 format_fixed(100.0 * s.improvement, 1), std::to_string(s.abstained)});
  return t;
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (const auto& row : t) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

/// Array of objects keyed by the header row; cells stay strings so the JSON
/// carries exactly the rounded values of the CSV.
inline nlohmann::json to_json_rows(const Table& t) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t r = 1; r < t.size(); ++r) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t c = 0; c < t[0].size() && c < t[r].size(); ++c) row[t[0][c]] = t[r][c];
    out.push_back(std::move(row));
  }
  return out;
}

inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (!t.empty() && cells.size() != t[0].size())
      throw ParseError(t.size() + 1, "expected " + std::to_string(t[0].size()) + " cells, found " +
                                         std::to_string(cells.size()));
    t.push_back(std::move(cells));
  }
  if (t.empty()) throw ParseError(1, "empty table");
  return t;
}

/// Right-aligned columns separated by two spaces, with a rule under the header.
inline std::string render_aligned(const Table& t) {
  std::vector<std::size_t> width(t.front().size(), 0);
  for (const auto& row : t)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (std::size_t r = 0; r < t.size(); ++r) {
    for (std::size_t c = 0; c < t[r].size(); ++c) {
      if (c) os << "  ";
      os << std::string(width[c] - t[r][c].size(), ' ') << t[r][c];
    }
    os << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    }
  }
  return os.str();
}

inline nlohmann::json to_json(const RunSummary& s) {
  return {{"rings", s.rings},
          {"nodes", s.nodes},
          {"tau", s.tau},
          {"f", s.f},
          {"trials", s.trials},
          {"std_failures", s.std_failures},
          {"reg_failures", s.reg_failures},
          {"std_only_failures", s.std_only_failures},
          {"reg_only_failures", s.reg_only_failures},
          {"std_ler", s.std_ler},
          {"reg_ler", s.reg_ler},
          {"improvement", s.improvement},
          {"p_value", s.p_value},
          {"correct_abstains", s.correct_abstains},
          {"misc_ternary", s.misc_ternary},
          {"ternary_events", s.ternary_events},
          {"binary_events", s.binary_events},
          {"flagged", s.flagged},
          {"abstained", s.abstained},
          {"abstain_pct", s.abstain_pct},
          {"syndrome_fano", s.syndrome_fano}};
}

}  // namespace tqec
