// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// hard criterion fails. Soft criteria print INFO.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ternary_qec.hpp"

using namespace tqec;

namespace {

int hard_failures = 0;

void report(const std::string& id, bool ok, const std::string& detail, bool soft = false) {
  const char* tag = soft ? "INFO" : (ok ? "PASS" : "FAIL");
  std::printf("[%s] %-4s %s%s\n", tag, id.c_str(), detail.c_str(), soft && !ok ? " (outside band, soft)" : "");
  std::fflush(stdout);
  if (!soft && !ok) ++hard_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

void criterion_1_2(const RunConfig& base) {
  RunConfig c = base;
  c.rings = 2;
  c.tau = 1;
  auto t0 = std::chrono::steady_clock::now();
  const auto null_row = sweep_sensitivity(c, {0.0}).front();
  const double secs = seconds_since(t0);
  const double abst_frac = null_row.flagged ? double(null_row.abstained) / double(null_row.flagged) : 0.0;
  report("1", std::abs(null_row.improvement) < 0.01 && abst_frac < 0.01 && secs < 30.0,
         fmt("null f=0: improvement=%.4f%% abstained/flagged=%llu/%llu (%.4f%%) runtime=%.1fs",
             100 * null_row.improvement, (unsigned long long)null_row.abstained,
             (unsigned long long)null_row.flagged, 100 * abst_frac, secs));

  const auto rows = sweep_sensitivity(c, table3_f_values());
  std::vector<double> f, impr;
  std::string list;
  for (const auto& r : rows) {
    f.push_back(r.f);
    impr.push_back(r.improvement);
    list += fmt("%s%.3f:%.1f%%", list.empty() ? "" : " ", r.f, 100 * r.improvement);
  }
  const double rho = stats::pearson(ranks(f), ranks(impr));
  report("2", std::abs(rho - 1.0) < 1e-12, fmt("spearman=%.4f improvements %s", rho, list.c_str()));
}

void criterion_3_4(const RunConfig& base, const std::array<double, 4>& ler_targets) {
  auto t0 = std::chrono::steady_clock::now();
  const auto rows = sweep_primary(base);
  const double secs = seconds_since(t0);

  bool a = true, b = true, c = true, d = true;
  std::string da, db, dc, dd;
  for (int i = 0; i < 4; ++i) {
    const auto& r1 = rows[i];
    const auto& r5 = rows[i + 4];
    a &= r1.improvement >= 0.05 && r1.improvement <= 0.25 && r1.p_value < 0.01;
    da += fmt(" %zu:%.1f%%(p=%.1e)", r1.nodes, 100 * r1.improvement, r1.p_value);
    b &= r1.improvement > r5.improvement;
    db += fmt(" %zu:%.1f%%%s%.1f%%", r1.nodes, 100 * r1.improvement, r1.improvement > r5.improvement ? ">" : "<=",
              100 * r5.improvement);
  }
  for (const auto& r : rows) {
    const bool band = r.tau == 1 ? (r.abstain_pct >= 0.70 && r.abstain_pct <= 0.85)
                                 : (r.abstain_pct >= 0.85 && r.abstain_pct <= 0.99);
    c &= band;
    dc += fmt(" %zu/%d:%.1f%%", r.nodes, r.tau, 100 * r.abstain_pct);
    const double frac = r.abstained ? double(r.misc_ternary) / double(r.abstained) : 0.0;
    d &= frac <= 0.02;
    dd += fmt(" %zu/%d:%llu/%llu", r.nodes, r.tau, (unsigned long long)r.misc_ternary,
              (unsigned long long)r.abstained);
  }
  report("3a", a, "tau=1 improvement in [5%,25%], p<0.01:" + da);
  report("3b", b, "improvement tau=1 > tau=5:" + db);
  report("3c", c, "abstain% tau=1 in [70,85], tau=5 in [85,99]:" + dc);
  report("3d", d, "misc_ternary <= 2% of abstentions:" + dd);
  report("3t", secs < 300.0, fmt("8-condition sweep runtime=%.1fs (limit 300s)", secs));

  bool in_band = true;
  std::string d4;
  for (int i = 0; i < 4; ++i) {
    const double rel = rows[i].std_ler / ler_targets[i] - 1.0;
    in_band &= std::abs(rel) <= 0.25;
    d4 += fmt(" %zu:%.4f vs %.4f (%+.1f%%)", rows[i].nodes, rows[i].std_ler, ler_targets[i], 100 * rel);
  }
  report("4", in_band, "Std LER vs targets:" + d4, true);
}

void criterion_5(const RunConfig& base) {
  Rng rng(derive_seed(base.master_seed, 5));
  const auto pois = generate_poisson_fixture(50, 100000, 0.07, rng);
  const double fa = stats::fano(pois.shot_counts());
  report("5a", std::abs(fa - (1.0 - 0.07)) <= 0.02, fmt("Poisson fixture F=%.4f, closed form %.4f", fa, 0.93));

  const HexCell cell = build_cell(2);
  const auto fit = fit_edge_coupling(cell, 0.07, 0.856, 20000, base.master_seed);
  Rng fresh(derive_seed(base.master_seed + 1, 0));
  const double fb =
      stats::fano(generate_edge_correlated_fixture(cell, 100000, 0.07, fit.coupling, fresh).shot_counts());
  RunConfig c = base;
  c.rings = 2;
  c.tau = 1;
  const double mixed = run_condition(c).syndrome_fano;
  report("5b", std::abs(fb - 0.856) <= 0.05,
         fmt("anti-bunched fixture coupling=%.4f F=%.4f at 1e5 fresh shots (mixed-model trial F=%.3f)", fit.coupling,
             fb, mixed));

  Rng trng(derive_seed(base.master_seed, 53));
  std::vector<double> fanos(756);
  for (auto& v : fanos) v = trng.normal();
  const double m = stats::mean(fanos), s = std::sqrt(stats::variance(fanos));
  for (auto& v : fanos) v = 0.856 + (v - m) / s * 0.03;
  const auto t = stats::t_vs_poisson(fanos);
  report("5c", t.t >= -146 && t.t <= -116, fmt("t_vs_poisson on 756 fanos: t=%.2f p=%.3e", t.t, t.p));
}

void criterion_6() {
  const auto fit = stats::fit_polynomial({3, 5, 7}, {34.4 * 3 + 0.6, 34.4 * 5 + 0.6, 34.4 * 7 + 0.6}, 1);
  const bool coef = std::abs(fit.coefficients[1] - 34.4) <= 1e-8 && std::abs(fit.coefficients[0] - 0.6) <= 1e-8 &&
                    std::abs(fit.r_squared - 1.0) <= 1e-12;
  const auto lin = stats::burst_ratios({34.4 * 3, 34.4 * 5, 34.4 * 7});
  const auto quad = stats::burst_ratios({9 * 2.5, 25 * 2.5, 49 * 2.5});
  const auto near = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
  const bool ratios = near(lin[0], 5.0 / 3) && near(lin[1], 7.0 / 5) && near(quad[0], 25.0 / 9) && near(quad[1], 49.0 / 25);
  report("6", coef && ratios,
         fmt("slope=%.10f intercept=%.10f R2=%.12f linear ratios %.6f,%.6f quadratic %.6f,%.6f", fit.coefficients[1],
             fit.coefficients[0], fit.r_squared, lin[0], lin[1], quad[0], quad[1]));
}

std::pair<std::vector<double>, std::vector<double>> kww_curve(double tau, double alpha, Rng* rng, double noise) {
  std::vector<double> t(40), y(40);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = 2.5 * tau * static_cast<double>(i) / 39.0;
    y[i] = std::exp(-std::pow(t[i] / tau, alpha));
    if (rng) y[i] *= 1.0 + noise * rng->normal();
  }
  return {t, y};
}

void criterion_7(const RunConfig& base) {
  Rng rng(derive_seed(base.master_seed, 7));
  std::vector<double> x(10000);
  for (auto& v : x) v = rng.normal();
  const double h = stats::dfa_hurst(x);

  const auto [t, y] = kww_curve(5.0, 4.0 / 3.0, nullptr, 0.0);
  const double alpha = stats::kww_fit(t, y).alpha_exp;

  std::vector<std::pair<std::vector<double>, std::vector<double>>> segs;
  for (int i = 0; i < 200; ++i) segs.push_back(kww_curve(3.0 + i % 7, i < 27 ? 4.0 / 3.0 : 1.0, &rng, 0.002));
  const auto frac = stats::kww_segment_fraction(segs, 0.05);

  report("7", std::abs(h - 0.5) <= 0.05 && std::abs(alpha - 4.0 / 3.0) <= 0.02 && std::abs(frac.fraction - 0.135) <= 0.03,
         fmt("DFA H=%.4f KWW alpha=%.4f segment fraction=%.4f (%zu fits, %zu failures)", h, alpha, frac.fraction,
             frac.successes, frac.failures));
}

void criterion_8() {
  const auto m = stats::alpha_s_map(0.8303, 7);
  bool ok = std::abs(m.ideal - 5.0 / 42.0) < 1e-15 && std::abs(m.ideal - 0.1190476190) < 1e-10 &&
            std::abs(m.corrected - (5.0 / 42.0 - 1.0 / 936.0)) < 1e-15 && std::abs(m.corrected - 0.1179792429) < 1e-10 &&
            std::abs(m.leading - 0.1186) <= 1e-4 && std::abs(m.deviation_pct - 0.4) <= 0.1;
  // (correlation, predicted F, measured F, quoted deviation %)
  const double triples[3][4] = {{0.080, 0.840, 0.846, 0.7}, {0.065, 0.870, 0.871, 0.1}, {0.076, 0.848, 0.849, 0.1}};
  std::string d;
  for (const auto& tr : triples) {
    const double pred = stats::fano_crosscheck(tr[0]);
    const double dev = 100.0 * std::abs(pred - tr[2]) / tr[2];
    ok &= std::abs(pred - tr[1]) < 1e-12 && std::abs(dev - tr[3]) < 0.05;
    d += fmt(" %.3f->%.3f vs %.3f (%.2f%%)", tr[0], pred, tr[2], dev);
  }
  report("8", ok, fmt("ideal=%.10f corrected=%.10f leading=%.4f dev=%.2f%%;", m.ideal, m.corrected, m.leading,
                      m.deviation_pct) + d);
}

void criterion_9(const RunConfig& base) {
  Rng a(derive_seed(base.master_seed, 9)), b(derive_seed(base.master_seed, 10));
  const std::vector<std::size_t> grid{1, 2, 4, 8};
  const auto flat = stats::fano_decompose(generate_drift_fixture(30, 20000, 8, 0.1, 0.0, a), grid);
  const auto grow = stats::fano_decompose(generate_drift_fixture(30, 20000, 8, 0.1, 0.6, b), grid);
  bool increasing = true;
  for (std::size_t i = 1; i < grow.aggregate_fano.size(); ++i)
    increasing &= grow.aggregate_fano[i] > grow.aggregate_fano[i - 1];
  std::string g;
  for (double f : grow.aggregate_fano) g += fmt(" %.3f", f);
  report("9", std::abs(flat.aggregate_slope) < 0.005 && increasing,
         fmt("independent slope=%.5f; coupled aggregate F over rounds {1,2,4,8}:", flat.aggregate_slope) + g);
}

void criterion_10(const std::string& cli, const std::string& workdir) {
  if (cli.empty()) {
    report("10", false, "no --cli binary given");
    return;
  }
  std::filesystem::create_directories(workdir);
  std::vector<std::string> files;
  bool ran = true;
  const char* threads[] = {"1", "1", "8"};
  for (int i = 0; i < 3; ++i) {
    const std::string out = workdir + "/determinism_" + std::to_string(i) + ".csv";
    const std::string cmd = std::string("TERNARY_QEC_THREADS=") + threads[i] + " '" + cli +
                            "' sweep --table 2 --seed 42 --out '" + out + "' 2>/dev/null";
    ran &= std::system(cmd.c_str()) == 0;
    files.push_back(slurp(out));
  }
  const bool same = ran && !files[0].empty() && files[0] == files[1] && files[0] == files[2];
  report("10", same, fmt("sweep --table 2 --seed 42: runs %s, %zu bytes, threads 1/1/8 %s", ran ? "ok" : "FAILED",
                         files[0].size(), same ? "byte-identical" : "differ"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli, workdir = std::filesystem::temp_directory_path().string() + "/tqec_acceptance";
  std::uint64_t trials = 100000;
  app.add_option("--cli", cli, "Path to the tqec binary (for the determinism check)");
  app.add_option("--workdir", workdir, "Scratch directory");
  app.add_option("--trials", trials, "Trials per Monte Carlo condition");
  CLI11_PARSE(app, argc, argv);

  RunConfig base;
  base.trials = trials;
  const auto ler_targets = CalibrationTargets{}.std_ler;

  criterion_1_2(base);
  criterion_3_4(base, ler_targets);
  criterion_5(base);
  criterion_6();
  criterion_7(base);
  criterion_8();
  criterion_9(base);
  criterion_10(cli, workdir);

  std::printf("%d hard criterion line(s) failed\n", hard_failures);
  return hard_failures ? 1 : 0;
}
