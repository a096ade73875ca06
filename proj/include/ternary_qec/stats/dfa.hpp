#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ternary_qec/errors.hpp"
#include "ternary_qec/stats/fit.hpp"

namespace tqec::stats {

struct DfaCurve {
  std::vector<double> scales;
  std::vector<double> fluctuations;
  double hurst = 0.0;
};

/// Log-spaced integer window sizes in [lo, hi], duplicates removed.
inline std::vector<std::size_t> log_spaced_scales(std::size_t lo, std::size_t hi, std::size_t count = 20) {
  std::vector<std::size_t> out;
  const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const auto s = static_cast<std::size_t>(std::lround(std::exp(a + t * (b - a))));
    if (out.empty() || s != out.back()) out.push_back(s);
  }
  return out;
}

/// Order-1 detrended fluctuation analysis.
inline DfaCurve dfa(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 64) throw ArgumentError("dfa needs at least 64 samples, got " + std::to_string(n));

  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  std::vector<double> profile(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) profile[i] = acc += x[i] - m;

  DfaCurve curve;
  std::vector<double> log_s, log_f;
  for (std::size_t s : log_spaced_scales(4, n / 4)) {
    const std::size_t segments = n / s;
    // Closed-form straight-line fit against t = 0..s-1.
    const double sd = static_cast<double>(s);
    const double t_mean = (sd - 1.0) / 2.0;
    const double t_var = (sd * sd - 1.0) / 12.0 * sd;  // sum (t - t_mean)^2
    double total = 0.0;
    for (std::size_t k = 0; k < segments; ++k) {
      const double* seg = profile.data() + k * s;
      double y_mean = 0.0;
      for (std::size_t t = 0; t < s; ++t) y_mean += seg[t];
      y_mean /= sd;
      double cov = 0.0;
      for (std::size_t t = 0; t < s; ++t) cov += (static_cast<double>(t) - t_mean) * (seg[t] - y_mean);
      const double slope = cov / t_var;
      for (std::size_t t = 0; t < s; ++t) {
        const double e = seg[t] - (y_mean + slope * (static_cast<double>(t) - t_mean));
        total += e * e;
      }
    }
    const double f = std::sqrt(total / static_cast<double>(segments * s));
    curve.scales.push_back(sd);
    curve.fluctuations.push_back(f);
    if (f > 0.0) {
      log_s.push_back(std::log(sd));
      log_f.push_back(std::log(f));
    }
  }
  if (log_s.size() < 2) throw DegenerateVarianceError("dfa: fluctuation function vanishes");
  curve.hurst = fit_polynomial(log_s, log_f, 1).coefficients[1];
  return curve;
}

inline double dfa_hurst(const std::vector<double>& x) { return dfa(x).hurst; }

}  // namespace tqec::stats
