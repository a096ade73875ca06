#pragma once

// Kohlrausch-Williams-Watts (stretched exponential) fitting:
//   y(t) = A * exp(-(t / tau_k)^alpha)

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ternary_qec/errors.hpp"
#include "ternary_qec/stats/fit.hpp"

namespace tqec::stats {

struct KwwFit {
  double amplitude = std::numeric_limits<double>::quiet_NaN();
  double tau_k = std::numeric_limits<double>::quiet_NaN();
  double alpha_exp = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::infinity();
  int iterations = 0;

  double operator()(double t) const { return amplitude * std::exp(-std::pow(t / tau_k, alpha_exp)); }
};

/// Raised when the fit does not converge; carries the best iterate reached.
class FitFailure : public std::runtime_error {
 public:
  FitFailure(const std::string& what, KwwFit best) : std::runtime_error(what), best_(best) {}
  const KwwFit& best() const noexcept { return best_; }

 private:
  KwwFit best_;
};

struct KwwOptions {
  int max_iterations = 300;
  double step_tolerance = 1e-11;
};

namespace detail {

// Parameters are (A, ln tau_k, ln alpha) so that tau_k and alpha stay positive.
using KwwParams = std::array<double, 3>;

inline double kww_sse(const std::vector<double>& t, const std::vector<double>& y, const KwwParams& p) {
  const double tau = std::exp(p[1]), a = std::exp(p[2]);
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = p[0] * std::exp(-std::pow(t[i] / tau, a)) - y[i];
    s += r * r;
  }
  return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
}

inline KwwFit kww_result(const KwwParams& p, double sse, std::size_t n, int iterations) {
  return {p[0], std::exp(p[1]), std::exp(p[2]), std::sqrt(sse / static_cast<double>(n)), iterations};
}

}  // namespace detail

/// Initial guess from ln(-ln(y/A)) = alpha ln t - alpha ln tau_k, scanning a
/// few amplitude candidates above max(y) and keeping the lowest residual.
inline KwwFit kww_initial_guess(const std::vector<double>& t, const std::vector<double>& y) {
  double y_max = 0.0;
  for (double v : y) y_max = std::max(y_max, v);
  detail::KwwParams best{};
  double best_sse = std::numeric_limits<double>::infinity();
  for (double scale : {1.0001, 1.001, 1.01, 1.05, 1.1, 1.25, 1.5, 2.0}) {
    const double a0 = y_max * scale;
    std::vector<double> lx, lz;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] <= 0.0 || y[i] >= a0) continue;
      const double z = std::log(-std::log(y[i] / a0));
      if (!std::isfinite(z)) continue;
      lx.push_back(std::log(t[i]));
      lz.push_back(z);
    }
    if (lx.size() < 2) continue;
    FitResult line;
    try {
      line = fit_polynomial(lx, lz, 1);
    } catch (const ArgumentError&) {
      continue;
    }
    const double alpha = line.coefficients[1];
    if (!(alpha > 1e-6) || !std::isfinite(alpha)) continue;
    const detail::KwwParams p{a0, -line.coefficients[0] / alpha, std::log(alpha)};
    const double sse = detail::kww_sse(t, y, p);
    if (sse < best_sse) {
      best_sse = sse;
      best = p;
    }
  }
  if (!std::isfinite(best_sse)) throw FitFailure("kww: no usable initial guess (degenerate data)", KwwFit{});
  return detail::kww_result(best, best_sse, t.size(), 0);
}

/// Least-squares KWW fit: log-log initial guess, then Levenberg-Marquardt
/// damped Gauss-Newton refinement.
inline KwwFit kww_fit(const std::vector<double>& t, const std::vector<double>& y, const KwwOptions& opt = {}) {
  if (t.size() != y.size()) throw ArgumentError("kww_fit: t and y differ in length");
  if (t.size() < 4) throw ArgumentError("kww_fit needs at least 4 points");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) throw ArgumentError("kww_fit requires y > 0");
    if (!(t[i] >= 0.0)) throw ArgumentError("kww_fit requires t >= 0");
    if (i > 0 && !(t[i] > t[i - 1])) throw ArgumentError("kww_fit requires strictly increasing t");
  }

  const KwwFit guess = kww_initial_guess(t, y);
  detail::KwwParams p{guess.amplitude, std::log(guess.tau_k), std::log(guess.alpha_exp)};
  double sse = detail::kww_sse(t, y, p);
  const std::size_t n = t.size();
  double lambda = 1e-3;

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd res(static_cast<Eigen::Index>(n));
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double tau = std::exp(p[1]), a = std::exp(p[2]);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double ratio = t[i] / tau;
      const double u = ratio > 0.0 ? std::pow(ratio, a) : 0.0;
      const double e = std::exp(-u);
      res(k) = p[0] * e - y[i];
      jac(k, 0) = e;
      jac(k, 1) = p[0] * e * a * u;
      jac(k, 2) = ratio > 0.0 ? -p[0] * e * a * u * std::log(ratio) : 0.0;
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d grad = jac.transpose() * res;

    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::Matrix3d lhs = jtj;
      for (int d = 0; d < 3; ++d) lhs(d, d) += lambda * std::max(jtj(d, d), 1e-300);
      const Eigen::Vector3d step = lhs.ldlt().solve(-grad);
      const detail::KwwParams trial{p[0] + step(0), p[1] + step(1), p[2] + step(2)};
      const double trial_sse = detail::kww_sse(t, y, trial);
      if (trial_sse <= sse) {
        double rel = 0.0;
        for (int d = 0; d < 3; ++d) rel = std::max(rel, std::abs(step(d)) / (1.0 + std::abs(p[d])));
        p = trial;
        sse = trial_sse;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (rel < opt.step_tolerance) return detail::kww_result(p, sse, n, it);
        break;
      }
      lambda *= 10.0;
    }
    // No damping level improves the residual: the iterate is stationary.
    if (!accepted) return detail::kww_result(p, sse, n, it);
  }
  throw FitFailure("kww: no convergence after " + std::to_string(opt.max_iterations) + " iterations",
                   detail::kww_result(p, sse, n, opt.max_iterations));
}

struct SegmentFraction {
  double fraction = 0.0;
  std::size_t in_band = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
};

/// Fraction of successfully fitted segments whose stretch exponent lies in
/// [center - delta, center + delta]. Failed fits are counted and excluded.
inline SegmentFraction kww_segment_fraction(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& segments, double delta,
    double center = 4.0 / 3.0) {
  if (!(delta > 0.0)) throw ArgumentError("kww_segment_fraction: delta must be positive");
  SegmentFraction out;
  for (const auto& [t, y] : segments) {
    try {
      const KwwFit fit = kww_fit(t, y);
      ++out.successes;
      if (std::abs(fit.alpha_exp - center) <= delta) ++out.in_band;
    } catch (const FitFailure&) {
      ++out.failures;
    } catch (const ArgumentError&) {
      ++out.failures;
    }
  }
  if (out.successes == 0) throw FitFailure("kww_segment_fraction: no segment could be fitted", KwwFit{});
  out.fraction = static_cast<double>(out.in_band) / static_cast<double>(out.successes);
  return out;
}

}  // namespace tqec::stats
