#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "ternary_qec/errors.hpp"

namespace tqec::stats {

inline double mean(const std::vector<double>& x) {
  if (x.empty()) throw ArgumentError("mean of an empty series");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance (n - 1 denominator), two-pass.
inline double variance(const std::vector<double>& x) {
  if (x.size() < 2) throw ArgumentError("variance needs at least 2 values, got " + std::to_string(x.size()));
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

/// Variance-to-mean ratio of a count series.
inline double fano(const std::vector<double>& counts) {
  if (counts.size() < 2)
    throw ArgumentError("fano needs at least 2 values, got " + std::to_string(counts.size()));
  for (double v : counts)
    if (!(v >= 0.0)) throw ArgumentError("fano expects non-negative counts");
  const double m = mean(counts);
  if (m == 0.0) throw MeanZeroError("fano undefined: mean count is zero");
  return variance(counts) / m;
}

/// Pearson correlation; throws DegenerateVarianceError if either side is constant.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("pearson needs two equal series of length >= 2");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateVarianceError("pearson: constant series");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tqec::stats
