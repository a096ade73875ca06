#pragma once

// Metrics computed directly on a SyndromeDataset: bursts, spatial and
// temporal correlation, and the spatial/temporal Fano decomposition.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ternary_qec/dataset.hpp"
#include "ternary_qec/errors.hpp"
#include "ternary_qec/stats/descriptive.hpp"
#include "ternary_qec/stats/fit.hpp"

namespace tqec::stats {

/// Per shot, the number of rounds with at least `threshold` simultaneous activations.
inline std::vector<double> burst_count(const SyndromeDataset& ds, std::size_t threshold = 2) {
  std::vector<double> out(ds.shots, 0.0);
  for (std::size_t s = 0; s < ds.shots; ++s)
    for (std::size_t r = 0; r < ds.rounds; ++r)
      if (ds.round_count(s, r) >= threshold) out[s] += 1.0;
  return out;
}

/// Consecutive ratios means[i+1] / means[i].
inline std::vector<double> burst_ratios(const std::vector<double>& means) {
  if (means.size() < 2) throw ArgumentError("burst_ratios needs at least 2 means");
  std::vector<double> out;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i - 1] == 0.0) throw ArgumentError("burst_ratios: zero mean at index " + std::to_string(i - 1));
    out.push_back(means[i] / means[i - 1]);
  }
  return out;
}

struct AdjacentCorrelation {
  double mean_corr = 0.0;
  double fraction_positive = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;
};

/// For each adjacent detector pair, the Pearson correlation of the two
/// activation indicators across shots, computed per round and averaged over
/// rounds. Rounds where either detector is constant are skipped; pairs with
/// no usable round are skipped.
inline AdjacentCorrelation adjacent_correlation(const SyndromeDataset& ds) {
  if (!ds.adjacency || ds.adjacency->empty()) throw ArgumentError("adjacent_correlation needs adjacency");
  if (ds.shots < 2) throw ArgumentError("adjacent_correlation needs at least 2 shots");

  AdjacentCorrelation res;
  std::size_t positive = 0;
  double total = 0.0;
  const double n = static_cast<double>(ds.shots);
  for (const auto& [a, b] : *ds.adjacency) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t r = 0; r < ds.rounds; ++r) {
      double na = 0, nb = 0, nab = 0;
      for (std::size_t s = 0; s < ds.shots; ++s) {
        const bool xa = ds.at(s, r, a), xb = ds.at(s, r, b);
        na += xa;
        nb += xb;
        nab += xa && xb;
      }
      const double va = na * (n - na), vb = nb * (n - nb);
      if (va == 0.0 || vb == 0.0) continue;
      sum += (n * nab - na * nb) / std::sqrt(va * vb);
      ++used;
    }
    if (used == 0) {
      ++res.pairs_skipped;
      continue;
    }
    const double c = sum / static_cast<double>(used);
    total += c;
    positive += c > 0.0;
    ++res.pairs_used;
  }
  if (res.pairs_used == 0) throw DegenerateVarianceError("adjacent_correlation: every pair has zero variance");
  res.mean_corr = total / static_cast<double>(res.pairs_used);
  res.fraction_positive = static_cast<double>(positive) / static_cast<double>(res.pairs_used);
  return res;
}

/// Sample autocorrelation at lag k (biased normalisation by the lag-0 sum).
inline double lag_autocorr(const std::vector<double>& x, std::size_t k) {
  if (x.size() <= k) throw ArgumentError("lag_autocorr: series length must exceed the lag");
  const double m = mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - m) * (x[t] - m);
    if (t + k < x.size()) num += (x[t] - m) * (x[t + k] - m);
  }
  if (den == 0.0) throw DegenerateVarianceError("lag_autocorr: zero variance");
  return num / den;
}

struct FanoDecomposition {
  std::vector<double> spatial_per_round;  // NaN where the round had zero mean
  std::vector<std::size_t> skipped_rounds;
  double spatial_round1 = std::numeric_limits<double>::quiet_NaN();
  double spatial_bulk = std::numeric_limits<double>::quiet_NaN();  // mean over rounds 2..R
  std::vector<std::size_t> aggregate_rounds;
  std::vector<double> aggregate_fano;
  double aggregate_slope = std::numeric_limits<double>::quiet_NaN();
};

/// Spatial Fano of each round's detector count across shots, and aggregate
/// Fano of counts summed over the first r rounds for each r in `round_grid`
/// (every round when empty). The slope of aggregate Fano against r measures
/// the cross-round component.
inline FanoDecomposition fano_decompose(const SyndromeDataset& ds, std::vector<std::size_t> round_grid = {}) {
  if (ds.rounds < 1) throw ArgumentError("fano_decompose needs at least one round");
  if (ds.shots < 2) throw ArgumentError("fano_decompose needs at least 2 shots");
  if (round_grid.empty())
    for (std::size_t r = 1; r <= ds.rounds; ++r) round_grid.push_back(r);

  FanoDecomposition out;
  std::vector<double> per_shot(ds.shots);
  double bulk_sum = 0.0;
  std::size_t bulk_n = 0;
  for (std::size_t r = 0; r < ds.rounds; ++r) {
    for (std::size_t s = 0; s < ds.shots; ++s) per_shot[s] = static_cast<double>(ds.round_count(s, r));
    double f = std::numeric_limits<double>::quiet_NaN();
    try {
      f = fano(per_shot);
    } catch (const MeanZeroError&) {
      out.skipped_rounds.push_back(r);
    }
    out.spatial_per_round.push_back(f);
    if (r > 0 && !std::isnan(f)) {
      bulk_sum += f;
      ++bulk_n;
    }
  }
  out.spatial_round1 = out.spatial_per_round.front();
  if (bulk_n > 0) out.spatial_bulk = bulk_sum / static_cast<double>(bulk_n);

  std::vector<double> xs;
  for (std::size_t r : round_grid) {
    if (r < 1 || r > ds.rounds)
      throw ArgumentError("round grid entry " + std::to_string(r) + " outside [1, " + std::to_string(ds.rounds) + "]");
    for (std::size_t s = 0; s < ds.shots; ++s) per_shot[s] = static_cast<double>(ds.shot_count(s, r));
    try {
      out.aggregate_fano.push_back(fano(per_shot));
      out.aggregate_rounds.push_back(r);
      xs.push_back(static_cast<double>(r));
    } catch (const MeanZeroError&) {
    }
  }
  if (xs.size() >= 2) out.aggregate_slope = fit_polynomial(xs, out.aggregate_fano, 1).coefficients[1];
  return out;
}

}  // namespace tqec::stats
