#pragma once

// Majority-vote detection, the five-feature regime classifier, and the
// correction semantics shared by both decoder policies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ternary_qec/error_model.hpp"
#include "ternary_qec/errors.hpp"
#include "ternary_qec/lattice.hpp"
#include "ternary_qec/rng.hpp"

namespace tqec {

struct ClassifierWeights {
  double isolation = 0.35;
  double boundary = 0.25;
  double density_contrast = 0.20;
  double chirality = 0.10;
  double temporal_consistency = 0.10;
  double theta = 0.3;

  double sum() const {
    return isolation + boundary + density_contrast + chirality + temporal_consistency;
  }

  void validate() const {
    for (double w : {isolation, boundary, density_contrast, chirality, temporal_consistency})
      if (!(w >= 0.0)) throw ArgumentError("classifier weights must be non-negative");
    if (std::abs(sum() - 1.0) > 1e-9)
      throw ArgumentError("classifier weights must sum to 1, got " + std::to_string(sum()));
    if (!(theta >= 0.0 && theta <= 1.0))
      throw ArgumentError("theta must lie in [0, 1], got " + std::to_string(theta));
  }

  friend bool operator==(const ClassifierWeights&, const ClassifierWeights&) = default;
};

inline void to_json(nlohmann::json& j, const ClassifierWeights& w) {
  j = nlohmann::json{{"isolation", w.isolation},
                     {"boundary", w.boundary},
                     {"density_contrast", w.density_contrast},
                     {"chirality", w.chirality},
                     {"temporal_consistency", w.temporal_consistency},
                     {"theta", w.theta}};
}

inline void from_json(const nlohmann::json& j, ClassifierWeights& w) {
  if (!j.is_object()) throw ArgumentError("classifier config must be a JSON object");
  static const std::vector<std::string> keys{"isolation", "boundary",             "density_contrast",
                                             "chirality", "temporal_consistency", "theta"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ArgumentError("unknown classifier key '" + key + "'");
    if (!value.is_number()) throw ArgumentError("classifier key '" + key + "' must be a number");
  }
  const auto get = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = j.at(key).get<double>();
  };
  get("isolation", w.isolation);
  get("boundary", w.boundary);
  get("density_contrast", w.density_contrast);
  get("chirality", w.chirality);
  get("temporal_consistency", w.temporal_consistency);
  get("theta", w.theta);
  w.validate();
}

struct NodeScore {
  double isolation = 0.0;
  double boundary = 0.0;
  double density_contrast = 0.0;
  double chirality = 0.0;
  double temporal_consistency = 0.0;
  double total = 0.0;
};

enum class DecoderPolicy { Standard, RegimeClassifier };

struct DecodeOutcome {
  std::vector<std::size_t> flagged;
  std::vector<std::size_t> abstained;
  std::vector<std::size_t> corrected;
  std::vector<std::size_t> residual_errors;
  bool logical_failure = false;
  int correct_abstains = 0;
  int misc_ternary = 0;
  int missed_binary = 0;
  int injected_errors = 0;
};

struct Decision {
  std::vector<std::size_t> abstained;
  std::vector<std::size_t> corrected;
};

/// Scores within this distance below theta count as ties and abstain, so
/// that tau-quantised scores are not split by rounding.
inline constexpr double kScoreTieTolerance = 1e-12;

inline bool is_flagged(const SyndromeWindow& w, std::size_t i) { return 2 * w.counts[i] > w.tau; }

/// Nodes whose count exceeds tau/2, ascending.
inline std::vector<std::size_t> detect(const SyndromeWindow& w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.nodes; ++i)
    if (is_flagged(w, i)) out.push_back(i);
  return out;
}

/// Feature scores of a flagged node.
///
/// Temporal consistency is 0 at tau = 1, where a single round carries no
/// persistence information, and counts/tau otherwise. Density contrast
/// compares the node with its busiest neighbour.
inline NodeScore score_node(const HexCell& cell, const SyndromeWindow& w, std::size_t i,
                            const ClassifierWeights& weights = {}) {
  if (w.nodes != cell.size())
    throw ArgumentError("window covers " + std::to_string(w.nodes) + " nodes, cell has " +
                        std::to_string(cell.size()));
  if (i >= w.nodes || !is_flagged(w, i))
    throw ContractViolation("score_node called on unflagged node " + std::to_string(i));

  const double tau = w.tau;
  const double own = w.counts[i] / tau;
  double max_nb = 0.0;
  for (std::size_t j : cell.neighbors(i)) max_nb = std::max(max_nb, w.counts[j] / tau);

  NodeScore s;
  s.isolation = 1.0 - max_nb;
  s.boundary = (6.0 - cell.coordination(i)) / 6.0;
  s.density_contrast = cell.neighbors(i).empty() ? own : std::max(0.0, own - max_nb);
  s.chirality = cell.chirality(i) != 0 ? 1.0 : 0.0;
  s.temporal_consistency = w.tau == 1 ? 0.0 : own;
  s.total = weights.isolation * s.isolation + weights.boundary * s.boundary +
            weights.density_contrast * s.density_contrast + weights.chirality * s.chirality +
            weights.temporal_consistency * s.temporal_consistency;
  return s;
}

inline bool abstains(const NodeScore& s, const ClassifierWeights& weights) {
  return s.total >= weights.theta - kScoreTieTolerance;
}

inline Decision decide(const HexCell& cell, const SyndromeWindow& w, DecoderPolicy policy,
                       const ClassifierWeights& weights = {}) {
  Decision d;
  for (std::size_t i : detect(w)) {
    if (policy == DecoderPolicy::RegimeClassifier && abstains(score_node(cell, w, i, weights), weights))
      d.abstained.push_back(i);
    else
      d.corrected.push_back(i);
  }
  return d;
}

/// Applies the corrections of one policy to the ground truth.
///
/// When s_fidelity < 1 one fidelity draw is consumed per Binary node in node
/// order, corrected or not, so two policies given copies of the same stream
/// see the same draws.
inline DecodeOutcome apply_corrections(const TrialEvents& events,
                                       const std::vector<std::size_t>& corrected,
                                       const std::vector<std::size_t>& abstained,
                                       const ModelConfig& cfg, Rng& rng) {
  const std::size_t n = events.size();
  enum : std::uint8_t { kUntouched, kCorrected, kAbstained };
  std::vector<std::uint8_t> action(n, kUntouched);
  for (std::size_t i : corrected) {
    if (i >= n) throw ArgumentError("corrected index " + std::to_string(i) + " out of range");
    if (action[i] != kUntouched) throw ContractViolation("node " + std::to_string(i) + " listed twice");
    action[i] = kCorrected;
  }
  for (std::size_t i : abstained) {
    if (i >= n) throw ArgumentError("abstained index " + std::to_string(i) + " out of range");
    if (action[i] != kUntouched)
      throw ContractViolation("node " + std::to_string(i) + " is both corrected and abstained");
    action[i] = kAbstained;
  }

  DecodeOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    if (action[i] != kUntouched) out.flagged.push_back(i);
    if (action[i] == kCorrected) out.corrected.push_back(i);
    if (action[i] == kAbstained) out.abstained.push_back(i);

    switch (events.kinds[i]) {
      case EventKind::Binary: {
        const bool fidelity_ok = cfg.s_fidelity >= 1.0 || rng.bernoulli(cfg.s_fidelity);
        if (action[i] != kCorrected) {
          ++out.missed_binary;
          out.residual_errors.push_back(i);
        } else if (!fidelity_ok) {
          out.residual_errors.push_back(i);
        }
        break;
      }
      case EventKind::Ternary:
        if (action[i] == kCorrected) {
          ++out.misc_ternary;
          out.residual_errors.push_back(i);
        } else if (action[i] == kAbstained) {
          ++out.correct_abstains;
        }
        break;
      case EventKind::None:
        if (action[i] == kCorrected) {
          ++out.injected_errors;
          out.residual_errors.push_back(i);
        }
        break;
    }
  }
  out.logical_failure = !out.residual_errors.empty();
  return out;
}

}  // namespace tqec
