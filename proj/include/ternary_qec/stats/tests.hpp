#pragma once

// One-sample t-test against the Poisson value and one-way ANOVA.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ternary_qec/errors.hpp"
#include "ternary_qec/stats/descriptive.hpp"

namespace tqec::stats {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

/// One-sample t-test of the mean Fano factor against 1.
/// A constant sample equal to 1 is reported as t = 0, p = 1; any other
/// constant sample has no defined statistic.
inline TTestResult t_vs_poisson(const std::vector<double>& fanos) {
  if (fanos.size() < 2) throw ArgumentError("t_vs_poisson needs at least 2 values");
  const double n = static_cast<double>(fanos.size());
  const double m = mean(fanos);
  const double var = variance(fanos);
  TTestResult r;
  r.df = n - 1.0;
  if (std::all_of(fanos.begin(), fanos.end(), [&](double v) { return v == fanos.front(); })) {
    if (fanos.front() == 1.0) return r;
    throw DegenerateVarianceError("t_vs_poisson: zero variance");
  }
  r.t = (m - 1.0) / std::sqrt(var / n);
  const boost::math::students_t_distribution<double> dist(r.df);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

struct AnovaResult {
  double f_stat = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
};

inline AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ArgumentError("anova needs at least 2 groups");
  std::size_t n_total = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw ArgumentError("each anova group needs at least 2 values");
    n_total += g.size();
    for (double v : g) grand += v;
  }
  grand /= static_cast<double>(n_total);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ss_within += (v - m) * (v - m);
  }
  AnovaResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(n_total - groups.size());
  if (ss_within == 0.0) throw DegenerateVarianceError("anova: zero within-group variance");
  r.f_stat = (ss_between / r.df_between) / (ss_within / r.df_within);
  const boost::math::fisher_f_distribution<double> dist(r.df_between, r.df_within);
  r.p = boost::math::cdf(boost::math::complement(dist, r.f_stat));
  return r;
}

}  // namespace tqec::stats
