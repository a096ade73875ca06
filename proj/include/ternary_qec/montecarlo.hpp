#pragma once

// Paired Monte Carlo comparison of the two decoder policies, the Table II/III
// sweeps, significance tests, and model calibration.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/hypergeometric.hpp>
#include <boost/math/distributions/normal.hpp>

#include "ternary_qec/decode.hpp"
#include "ternary_qec/error_model.hpp"
#include "ternary_qec/errors.hpp"
#include "ternary_qec/lattice.hpp"
#include "ternary_qec/rng.hpp"
#include "ternary_qec/stats/descriptive.hpp"

namespace tqec {

struct RunConfig {
  int rings = 2;
  int tau = 1;
  std::uint64_t trials = 100000;
  ModelConfig model;
  ClassifierWeights weights;
  std::uint64_t master_seed = 42;

  void validate() const {
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    if (tau < 1) throw ArgumentError("tau must be >= 1, got " + std::to_string(tau));
    if (rings < 0 || rings > kMaxRings) throw ArgumentError("rings out of range: " + std::to_string(rings));
    model.validate();
    weights.validate();
  }
};

struct RunSummary {
  int rings = 0;
  std::size_t nodes = 0;
  int tau = 0;
  double f = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t std_failures = 0;
  std::uint64_t reg_failures = 0;
  std::uint64_t std_only_failures = 0;  // discordant: only the standard decoder failed
  std::uint64_t reg_only_failures = 0;  // discordant: only the regime decoder failed
  std::uint64_t correct_abstains = 0;
  std::uint64_t misc_ternary = 0;
  std::uint64_t ternary_events = 0;
  std::uint64_t binary_events = 0;
  std::uint64_t flagged = 0;
  std::uint64_t abstained = 0;
  double std_ler = 0.0;
  double reg_ler = 0.0;
  double improvement = 0.0;
  double p_value = 1.0;
  double abstain_pct = 0.0;
  double syndrome_fano = std::numeric_limits<double>::quiet_NaN();  // per-trial activation counts
};

/// Integer tallies of a block of trials. Addition is associative and
/// commutative, so any split of the trial range gives the same total.
struct TrialTally {
  std::uint64_t std_failures = 0, reg_failures = 0, std_only = 0, reg_only = 0;
  std::uint64_t correct_abstains = 0, misc_ternary = 0, ternary = 0, binary = 0;
  std::uint64_t flagged = 0, abstained = 0;
  std::uint64_t act_sum = 0, act_sumsq = 0;

  TrialTally& operator+=(const TrialTally& o) {
    std_failures += o.std_failures;
    reg_failures += o.reg_failures;
    std_only += o.std_only;
    reg_only += o.reg_only;
    correct_abstains += o.correct_abstains;
    misc_ternary += o.misc_ternary;
    ternary += o.ternary;
    binary += o.binary;
    flagged += o.flagged;
    abstained += o.abstained;
    act_sum += o.act_sum;
    act_sumsq += o.act_sumsq;
    return *this;
  }
};

/// Worker count: TERNARY_QEC_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("TERNARY_QEC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end, tally) over [0, n) split into contiguous blocks.
inline TrialTally parallel_tally(std::uint64_t n,
                                 const std::function<void(std::uint64_t, std::uint64_t, TrialTally&)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), n));
  std::vector<TrialTally> parts(workers);
  if (workers <= 1) {
    body(0, n, parts[0]);
    return parts[0];
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t b = n * w / workers, e = n * (w + 1) / workers;
    pool.emplace_back([&, b, e, w] { body(b, e, parts[w]); });
  }
  for (auto& t : pool) t.join();
  TrialTally total;
  for (const auto& p : parts) total += p;
  return total;
}

/// Two-sided exact binomial test on discordant pairs (McNemar exact form).
inline double paired_test(std::uint64_t std_only, std::uint64_t reg_only) {
  const std::uint64_t n = std_only + reg_only;
  if (n == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  const double k = static_cast<double>(std::min(std_only, reg_only));
  return std::min(1.0, 2.0 * boost::math::cdf(dist, k));
}

/// Two-sided test of k1/n1 == k2/n2. Pooled z-test normally; Fisher's exact
/// test when an expected cell is below 5 or either sample is below 30.
inline double two_proportion_test(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  if (n1 < 1 || n2 < 1) throw ArgumentError("sample sizes must be >= 1");
  if (k1 > n1 || k2 > n2) throw ArgumentError("successes cannot exceed sample size");

  const double N = static_cast<double>(n1 + n2);
  const double K = static_cast<double>(k1 + k2);
  const double e_min = std::min({K * n1 / N, K * n2 / N, (N - K) * n1 / N, (N - K) * n2 / N});

  if (e_min < 5.0 || std::min(n1, n2) < 30) {
    // Fisher: sum the hypergeometric probabilities no larger than the observed one.
    const auto r = static_cast<unsigned>(k1 + k2);
    const boost::math::hypergeometric_distribution<double> h(r, static_cast<unsigned>(n1),
                                                             static_cast<unsigned>(n1 + n2));
    const auto [lo, hi] = boost::math::support(h);
    const double p_obs = boost::math::pdf(h, static_cast<unsigned>(k1));
    double p = 0.0;
    for (auto x = static_cast<unsigned>(lo); x <= static_cast<unsigned>(hi); ++x) {
      const double px = boost::math::pdf(h, x);
      if (px <= p_obs * (1.0 + 1e-7)) p += px;
    }
    return std::min(1.0, p);
  }

  const double p1 = static_cast<double>(k1) / n1, p2 = static_cast<double>(k2) / n2;
  const double pool = K / N;
  const double se = std::sqrt(pool * (1.0 - pool) * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) return 1.0;
  const double z = std::abs(p1 - p2) / se;
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(), z)));
}

/// One paired trial: the window is sampled once and decoded by both policies
/// with a shared fidelity stream.
inline void run_trial(const HexCell& cell, const RunConfig& cfg, std::uint64_t trial, TrialTally& t) {
  Rng rng(derive_seed(cfg.master_seed, trial));
  const TrialEvents ev = sample_events(cell, cfg.model, rng);
  const SyndromeWindow w = extract_syndrome(cell, ev, cfg.tau, cfg.model, rng);

  const Decision std_dec = decide(cell, w, DecoderPolicy::Standard, cfg.weights);
  const Decision reg_dec = decide(cell, w, DecoderPolicy::RegimeClassifier, cfg.weights);
  Rng fid_std = rng, fid_reg = rng;
  const DecodeOutcome so = apply_corrections(ev, std_dec.corrected, std_dec.abstained, cfg.model, fid_std);
  const DecodeOutcome ro = apply_corrections(ev, reg_dec.corrected, reg_dec.abstained, cfg.model, fid_reg);

  t.std_failures += so.logical_failure;
  t.reg_failures += ro.logical_failure;
  t.std_only += so.logical_failure && !ro.logical_failure;
  t.reg_only += ro.logical_failure && !so.logical_failure;
  t.correct_abstains += static_cast<std::uint64_t>(ro.correct_abstains);
  t.misc_ternary += static_cast<std::uint64_t>(ro.misc_ternary);
  t.ternary += ev.count(EventKind::Ternary);
  t.binary += ev.count(EventKind::Binary);
  t.flagged += ro.flagged.size();
  t.abstained += ro.abstained.size();
  std::uint64_t acts = 0;
  for (int c : w.counts) acts += static_cast<std::uint64_t>(c);
  t.act_sum += acts;
  t.act_sumsq += acts * acts;
}

inline RunSummary summarize(const RunConfig& cfg, std::size_t nodes, const TrialTally& t) {
  RunSummary s;
  s.rings = cfg.rings;
  s.nodes = nodes;
  s.tau = cfg.tau;
  s.f = cfg.model.f;
  s.trials = cfg.trials;
  s.std_failures = t.std_failures;
  s.reg_failures = t.reg_failures;
  s.std_only_failures = t.std_only;
  s.reg_only_failures = t.reg_only;
  s.correct_abstains = t.correct_abstains;
  s.misc_ternary = t.misc_ternary;
  s.ternary_events = t.ternary;
  s.binary_events = t.binary;
  s.flagged = t.flagged;
  s.abstained = t.abstained;
  const double n = static_cast<double>(cfg.trials);
  s.std_ler = t.std_failures / n;
  s.reg_ler = t.reg_failures / n;
  s.improvement = t.std_failures > 0
                      ? (static_cast<double>(t.std_failures) - static_cast<double>(t.reg_failures)) /
                            static_cast<double>(t.std_failures)
                      : 0.0;
  s.p_value = paired_test(t.std_only, t.reg_only);
  s.abstain_pct = t.ternary > 0 ? static_cast<double>(t.correct_abstains) / t.ternary : 0.0;
  if (cfg.trials >= 2 && t.act_sum > 0) {
    const double mean = t.act_sum / n;
    const double var = (static_cast<double>(t.act_sumsq) - n * mean * mean) / (n - 1.0);
    s.syndrome_fano = var / mean;
  }
  return s;
}

inline RunSummary run_condition(const RunConfig& cfg) {
  cfg.validate();
  const HexCell cell = build_cell(cfg.rings);
  const TrialTally t = parallel_tally(cfg.trials, [&](std::uint64_t b, std::uint64_t e, TrialTally& part) {
    for (std::uint64_t i = b; i < e; ++i) run_trial(cell, cfg, i, part);
  });
  return summarize(cfg, cell.size(), t);
}

/// Table II: rings 1..4 at tau = 1, then rings 1..4 at tau = 5.
inline std::vector<RunSummary> sweep_primary(const RunConfig& base) {
  std::vector<RunSummary> out;
  for (int tau : {1, 5})
    for (int rings = 1; rings <= 4; ++rings) {
      RunConfig c = base;
      c.rings = rings;
      c.tau = tau;
      out.push_back(run_condition(c));
    }
  return out;
}

inline const std::vector<double>& table3_f_values() {
  static const std::vector<double> v{0.0, 0.05, 0.10, 0.144, 0.20, 0.30};
  return v;
}

/// Table III: one run per ternary fraction at the base cell and depth.
inline std::vector<RunSummary> sweep_sensitivity(const RunConfig& base, const std::vector<double>& f_values) {
  if (!std::is_sorted(f_values.begin(), f_values.end()))
    throw ArgumentError("f_values must be sorted ascending");
  std::vector<RunSummary> out;
  for (double f : f_values) {
    RunConfig c = base;
    c.model.f = f;
    out.push_back(run_condition(c));
  }
  return out;
}

// ---------------------------------------------------------------- calibration

struct EdgeCouplingFit {
  double coupling = 0.0;
  double fano = 0.0;
};

/// Bisection for the edge coupling at which the edge-correlated fixture on
/// `cell` reaches `target_fano`. Every evaluation reuses the same seed, so
/// the measured Fano is a deterministic, monotone-in-practice function.
inline EdgeCouplingFit fit_edge_coupling(const HexCell& cell, double base_rate, double target_fano,
                                         std::size_t shots, std::uint64_t seed, int iterations = 40) {
  const auto measure = [&](double c) {
    Rng rng(derive_seed(seed, 0));
    return stats::fano(generate_edge_correlated_fixture(cell, shots, base_rate, c, rng).shot_counts());
  };
  double lo = -1.0, hi = 1.0;
  const double f_lo = measure(lo), f_hi = measure(hi);
  if (target_fano < f_lo || target_fano > f_hi)
    throw ArgumentError("target Fano " + std::to_string(target_fano) + " outside reachable range [" +
                        std::to_string(f_lo) + ", " + std::to_string(f_hi) + "]");
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (measure(mid) < target_fano ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  return {c, measure(c)};
}

struct CalibrationGrid {
  std::vector<double> a_b{0.10};
  std::vector<double> a_t{0.80};
  std::vector<double> leak_c{0.90};
  std::vector<double> q_false{0.0};
  std::vector<double> s_fidelity{1.0};
  std::vector<double> alpha{0.5};
  int refine_levels = 1;

  std::size_t size() const {
    return a_b.size() * a_t.size() * leak_c.size() * q_false.size() * s_fidelity.size() * alpha.size();
  }
};

struct CalibrationTargets {
  std::array<double, 4> std_ler{0.0680, 0.1658, 0.2877, 0.4295};  // rings 1..4, tau = 1
  double fano = 0.856;
  double fano_tolerance = 0.05;
  double fixture_base_rate = 0.07;
  int fixture_rings = 2;
  std::size_t fixture_shots = 20000;
};

struct CalibrationResult {
  ModelConfig model;
  double objective = std::numeric_limits<double>::infinity();
  std::array<double, 4> simulated_std_ler{};
  double edge_coupling = 0.0;
  double fixture_fano = 0.0;
  bool fano_in_band = false;
  double model_syndrome_fano = 0.0;  // mixed model, 19 nodes, tau = 1
  std::size_t evaluations = 0;
};

namespace detail {

inline std::vector<double> refine_axis(const std::vector<double>& coarse, double best, int level) {
  if (coarse.size() < 2) return {best};
  std::vector<double> sorted = coarse;
  std::sort(sorted.begin(), sorted.end());
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] > sorted[i - 1]) step = std::min(step, sorted[i] - sorted[i - 1]);
  if (!std::isfinite(step)) return {best};
  const double h = step / std::pow(2.0, level);
  std::vector<double> out{best};
  for (double v : {best - h, best + h})
    if (v >= 0.0 && v <= 1.0) out.push_back(v);
  return out;
}

}  // namespace detail

/// Deterministic coarse-to-fine grid search minimising the summed squared
/// relative error of the four tau = 1 standard-decoder LERs. The Fano target
/// is met by fitting the edge coupling of the edge-correlated fixture; the
/// result records whether it lies inside the tolerance band.
inline CalibrationResult calibrate(const CalibrationTargets& targets, const CalibrationGrid& grid,
                                   const RunConfig& base) {
  if (grid.size() == 0) throw ArgumentError("calibration grid is empty");
  for (double t : targets.std_ler)
    if (!(t > 0.0)) throw ArgumentError("target LERs must be positive");

  CalibrationResult best;
  const auto evaluate = [&](const ModelConfig& m) {
    std::array<double, 4> sim{};
    double obj = 0.0;
    for (int rings = 1; rings <= 4; ++rings) {
      RunConfig c = base;
      c.model = m;
      c.rings = rings;
      c.tau = 1;
      sim[rings - 1] = run_condition(c).std_ler;
      const double rel = (sim[rings - 1] - targets.std_ler[rings - 1]) / targets.std_ler[rings - 1];
      obj += rel * rel;
    }
    ++best.evaluations;
    if (obj < best.objective) {
      best.objective = obj;
      best.model = m;
      best.simulated_std_ler = sim;
    }
  };
  const auto search = [&](const CalibrationGrid& g) {
    for (double ab : g.a_b)
      for (double at : g.a_t)
        for (double lc : g.leak_c)
          for (double qf : g.q_false)
            for (double sf : g.s_fidelity)
              for (double al : g.alpha) {
                ModelConfig m = base.model;
                m.a_b = ab;
                m.a_t = at;
                m.leak_c = lc;
                m.q_false = qf;
                m.s_fidelity = sf;
                m.alpha = al;
                m.validate();
                evaluate(m);
              }
  };

  search(grid);
  for (int level = 1; level <= grid.refine_levels; ++level) {
    const ModelConfig b = best.model;
    CalibrationGrid fine;
    fine.a_b = detail::refine_axis(grid.a_b, b.a_b, level);
    fine.a_t = detail::refine_axis(grid.a_t, b.a_t, level);
    fine.leak_c = detail::refine_axis(grid.leak_c, b.leak_c, level);
    fine.q_false = detail::refine_axis(grid.q_false, b.q_false, level);
    fine.s_fidelity = detail::refine_axis(grid.s_fidelity, b.s_fidelity, level);
    fine.alpha = detail::refine_axis(grid.alpha, b.alpha, level);
    if (fine.size() > 1) search(fine);
  }

  const EdgeCouplingFit fit = fit_edge_coupling(build_cell(targets.fixture_rings), targets.fixture_base_rate,
                                                targets.fano, targets.fixture_shots, base.master_seed);
  best.edge_coupling = fit.coupling;
  best.fixture_fano = fit.fano;
  best.fano_in_band = std::abs(fit.fano - targets.fano) <= targets.fano_tolerance;

  RunConfig probe = base;
  probe.model = best.model;
  probe.rings = 2;
  probe.tau = 1;
  best.model_syndrome_fano = run_condition(probe).syndrome_fano;
  return best;
}

}  // namespace tqec
