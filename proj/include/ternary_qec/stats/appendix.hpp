#pragma once

// Fano-to-coupling arithmetic and the correlation cross-check.

#include <cmath>
#include <string>

#include "ternary_qec/errors.hpp"

namespace tqec::stats {

struct AlphaSMap {
  double leading = 0.0;        // F / cell_size
  double ideal = 0.0;          // 5 / 42
  double corrected = 0.0;      // 5 / 42 - 1 / 936
  double deviation_pct = 0.0;  // 100 * |leading - ideal| / ideal
};

inline constexpr double kAlphaSIdeal = 5.0 / 42.0;
inline constexpr double kAlphaSCorrected = 5.0 / 42.0 - 1.0 / 936.0;

inline AlphaSMap alpha_s_map(double fano_factor, int cell_size = 7) {
  if (!(fano_factor > 0.0)) throw ArgumentError("alpha_s_map requires F > 0");
  if (cell_size < 1) throw ArgumentError("alpha_s_map requires a positive cell size");
  AlphaSMap m;
  m.leading = fano_factor / cell_size;
  m.ideal = kAlphaSIdeal;
  m.corrected = kAlphaSCorrected;
  m.deviation_pct = 100.0 * std::abs(m.leading - m.ideal) / m.ideal;
  return m;
}

/// Fano factor predicted from the mean adjacent correlation: 1 - 2 * corr.
inline double fano_crosscheck(double adjacent_corr) { return 1.0 - 2.0 * adjacent_corr; }

}  // namespace tqec::stats
