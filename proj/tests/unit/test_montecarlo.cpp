#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "ternary_qec/montecarlo.hpp"

using namespace tqec;

namespace {

class ThreadEnv {
 public:
  explicit ThreadEnv(const char* value) { setenv("TERNARY_QEC_THREADS", value, 1); }
  ~ThreadEnv() { unsetenv("TERNARY_QEC_THREADS"); }
};

RunConfig small(int rings, int tau, std::uint64_t trials) {
  RunConfig c;
  c.rings = rings;
  c.tau = tau;
  c.trials = trials;
  return c;
}

// Fisher's exact two-sided p-value by direct enumeration of the 2x2 tables
// with fixed margins, using log-factorials.
double fisher_oracle(int k1, int n1, int k2, int n2) {
  const auto lf = [](int n) { return std::lgamma(n + 1.0); };
  const int k = k1 + k2, n = n1 + n2;
  const auto prob = [&](int x) {
    return std::exp(lf(k) + lf(n - k) + lf(n1) + lf(n2) - lf(n) - lf(x) - lf(k - x) - lf(n1 - x) - lf(n2 - k + x));
  };
  const double obs = prob(k1);
  double p = 0.0;
  for (int x = std::max(0, k - n2); x <= std::min(k, n1); ++x)
    if (prob(x) <= obs * (1 + 1e-7)) p += prob(x);
  return std::min(1.0, p);
}

}  // namespace

TEST(TwoProportion, EqualProportionsGiveOne) {
  EXPECT_DOUBLE_EQ(two_proportion_test(50, 1000, 50, 1000), 1.0);
  EXPECT_DOUBLE_EQ(two_proportion_test(3, 10, 3, 10), 1.0);
}

TEST(TwoProportion, PooledZBranch) {
  const double p1 = 0.068, p2 = 0.0548, pool = (680.0 + 548.0) / 20000.0;
  const double z = (p1 - p2) / std::sqrt(pool * (1 - pool) * (2.0 / 10000));
  EXPECT_NEAR(z, 3.89, 0.01);
  const double p = two_proportion_test(680, 10000, 548, 10000);
  EXPECT_NEAR(p, std::erfc(z / std::sqrt(2.0)), 1e-12);
  EXPECT_LT(p, 0.001);
}

TEST(TwoProportion, ExactBranch) {
  const double p = two_proportion_test(1, 10, 9, 10);
  EXPECT_NEAR(p, fisher_oracle(1, 10, 9, 10), 1e-10);
  EXPECT_LT(p, 0.01);
  EXPECT_NEAR(two_proportion_test(2, 40, 0, 35), fisher_oracle(2, 40, 0, 35), 1e-10);
}

TEST(TwoProportion, RejectsInvalidCounts) {
  EXPECT_THROW(two_proportion_test(5, 4, 1, 10), ArgumentError);
  EXPECT_THROW(two_proportion_test(0, 0, 1, 10), ArgumentError);
}

TEST(PairedTest, ExactBinomialOracle) {
  // b = 2, c = 10: P = 2 * sum_{k<=2} C(12,k) / 2^12.
  const double expect = 2.0 * (1 + 12 + 66) / 4096.0;
  EXPECT_NEAR(paired_test(2, 10), expect, 1e-12);
  EXPECT_NEAR(paired_test(10, 2), expect, 1e-12);
  EXPECT_DOUBLE_EQ(paired_test(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(paired_test(7, 7), 1.0);
}

TEST(RunCondition, ZeroTrialsRejected) {
  EXPECT_THROW(run_condition(small(2, 1, 0)), ArgumentError);
}

TEST(RunCondition, NoErrorsNoFailures) {
  RunConfig c = small(2, 1, 1);
  c.model.p = 0.0;
  const auto s = run_condition(c);
  EXPECT_EQ(s.std_ler, 0.0);
  EXPECT_EQ(s.reg_ler, 0.0);
}

TEST(RunCondition, IndependentOfThreadCount) {
  RunConfig c = small(3, 5, 20000);
  RunSummary a, b;
  {
    ThreadEnv env("1");
    a = run_condition(c);
  }
  {
    ThreadEnv env("7");
    b = run_condition(c);
  }
  EXPECT_EQ(a.std_failures, b.std_failures);
  EXPECT_EQ(a.reg_failures, b.reg_failures);
  EXPECT_EQ(a.correct_abstains, b.correct_abstains);
  EXPECT_EQ(a.misc_ternary, b.misc_ternary);
  EXPECT_EQ(a.flagged, b.flagged);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.syndrome_fano, b.syndrome_fano);
}

TEST(RunCondition, SummaryInvariants) {
  const auto s = run_condition(small(2, 1, 20000));
  EXPECT_GE(s.abstain_pct, 0.0);
  EXPECT_LE(s.abstain_pct, 1.0);
  EXPECT_DOUBLE_EQ(s.abstain_pct, double(s.correct_abstains) / s.ternary_events);
  EXPECT_EQ(s.std_failures - s.std_only_failures, s.reg_failures - s.reg_only_failures);
  EXPECT_NEAR(s.improvement, (s.std_ler - s.reg_ler) / s.std_ler, 1e-12);
}

TEST(RunCondition, NullModelHasNoEffect) {
  RunConfig c = small(2, 1, 20000);
  c.model.f = 0.0;
  const auto s = run_condition(c);
  EXPECT_LT(std::abs(s.improvement), 0.01);
  EXPECT_EQ(s.ternary_events, 0u);
}

TEST(PairedDesign, TrialLevelProperties) {
  // Replays trials by hand: without abstentions both policies agree, and
  // when every abstention is a Ternary node the regime decoder cannot fail
  // where the standard one succeeds.
  const HexCell cell = build_cell(2);
  RunConfig cfg = small(2, 1, 1);
  cfg.model.s_fidelity = 0.9;
  int with_abstain = 0;
  for (std::uint64_t t = 0; t < 30000; ++t) {
    Rng rng(derive_seed(cfg.master_seed, t));
    const auto ev = sample_events(cell, cfg.model, rng);
    const auto w = extract_syndrome(cell, ev, 1, cfg.model, rng);
    const auto sd = decide(cell, w, DecoderPolicy::Standard, cfg.weights);
    const auto rd = decide(cell, w, DecoderPolicy::RegimeClassifier, cfg.weights);
    Rng fa = rng, fb = rng;
    const auto so = apply_corrections(ev, sd.corrected, sd.abstained, cfg.model, fa);
    const auto ro = apply_corrections(ev, rd.corrected, rd.abstained, cfg.model, fb);
    if (rd.abstained.empty()) {
      EXPECT_EQ(so.logical_failure, ro.logical_failure);
      EXPECT_EQ(so.residual_errors, ro.residual_errors);
      continue;
    }
    ++with_abstain;
    bool all_ternary = true;
    for (std::size_t i : rd.abstained) all_ternary &= ev.kinds[i] == EventKind::Ternary;
    if (all_ternary) {
      EXPECT_LE(ro.logical_failure, so.logical_failure);
    }
  }
  EXPECT_GT(with_abstain, 100);
}

TEST(Sweeps, PrimaryRowOrder) {
  const auto rows = sweep_primary(small(1, 1, 500));
  ASSERT_EQ(rows.size(), 8u);
  const std::size_t nodes[] = {7, 19, 37, 61};
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(rows[i].nodes, nodes[i % 4]);
    EXPECT_EQ(rows[i].tau, i < 4 ? 1 : 5);
  }
}

TEST(Sweeps, SensitivityRequiresSortedGrid) {
  EXPECT_THROW(sweep_sensitivity(small(2, 1, 10), {0.2, 0.1}), ArgumentError);
  const auto rows = sweep_sensitivity(small(2, 1, 500), {0.0, 0.3});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].abstained, 0u);
  EXPECT_DOUBLE_EQ(rows[1].f, 0.3);
}

TEST(Calibrate, EmptyGridRejected) {
  CalibrationGrid g;
  g.a_b.clear();
  EXPECT_THROW(calibrate(CalibrationTargets{}, g, small(1, 1, 100)), ArgumentError);
}

TEST(Calibrate, RecoversGridPointFromItsOwnOutput) {
  RunConfig base = small(1, 1, 3000);
  ModelConfig truth = base.model;
  truth.q_false = 0.01;
  truth.s_fidelity = 0.9;
  CalibrationTargets targets;
  targets.fixture_shots = 4000;
  for (int rings = 1; rings <= 4; ++rings) {
    RunConfig c = base;
    c.model = truth;
    c.rings = rings;
    targets.std_ler[rings - 1] = run_condition(c).std_ler;
  }
  CalibrationGrid grid;
  grid.q_false = {0.0, 0.01, 0.02};
  grid.s_fidelity = {0.9, 1.0};
  grid.refine_levels = 1;
  const auto r = calibrate(targets, grid, base);
  EXPECT_DOUBLE_EQ(r.model.q_false, 0.01);
  EXPECT_DOUBLE_EQ(r.model.s_fidelity, 0.9);
  EXPECT_DOUBLE_EQ(r.objective, 0.0);
  EXPECT_EQ(r.evaluations, 6u + 9u);  // coarse 3 x 2 grid, then a 3 x 3 refinement
}

TEST(Calibrate, EdgeCouplingReachesFanoTarget) {
  const auto fit = fit_edge_coupling(build_cell(2), 0.07, 0.856, 20000, 42);
  EXPECT_LT(fit.coupling, 0.0);
  EXPECT_NEAR(fit.fano, 0.856, 0.01);
  EXPECT_THROW(fit_edge_coupling(build_cell(2), 0.07, 0.2, 2000, 42), ArgumentError);
}
