#pragma once

// Mixed binary/ternary event model, syndrome extraction over a detection
// window, and synthetic syndrome fixtures for the statistics toolkit.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ternary_qec/dataset.hpp"
#include "ternary_qec/errors.hpp"
#include "ternary_qec/lattice.hpp"
#include "ternary_qec/rng.hpp"

namespace tqec {

enum class EventKind : std::uint8_t { None = 0, Binary = 1, Ternary = 2 };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::None: return "none";
    case EventKind::Binary: return "binary";
    case EventKind::Ternary: return "ternary";
  }
  return "?";
}

struct ModelConfig {
  double p = 0.01;
  double f = 0.144;
  double alpha = 0.5;
  double interior_suppression = 0.5;
  double a_b = 0.10;
  double leak_c = 0.90;
  double a_t = 0.80;
  double q_false = 0.0;
  double s_fidelity = 1.0;

  void validate() const {
    const auto check = [](const char* name, double v) {
      if (!(v >= 0.0 && v <= 1.0))
        throw ArgumentError(std::string("model field '") + name + "' must lie in [0, 1], got " +
                            std::to_string(v));
    };
    check("p", p);
    check("f", f);
    check("alpha", alpha);
    check("interior_suppression", interior_suppression);
    check("a_b", a_b);
    check("leak_c", leak_c);
    check("a_t", a_t);
    check("q_false", q_false);
    check("s_fidelity", s_fidelity);
  }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline const std::vector<std::string>& model_config_keys() {
  static const std::vector<std::string> keys{"p",   "f",      "alpha",   "interior_suppression",
                                             "a_b", "leak_c", "a_t",     "q_false",
                                             "s_fidelity"};
  return keys;
}

inline void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"p", c.p},
                     {"f", c.f},
                     {"alpha", c.alpha},
                     {"interior_suppression", c.interior_suppression},
                     {"a_b", c.a_b},
                     {"leak_c", c.leak_c},
                     {"a_t", c.a_t},
                     {"q_false", c.q_false},
                     {"s_fidelity", c.s_fidelity}};
}

/// Reads the fields present in `j` over the defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, ModelConfig& c) {
  if (!j.is_object()) throw ArgumentError("model config must be a JSON object");
  const auto& keys = model_config_keys();
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ArgumentError("unknown model config key '" + key + "'");
    if (!value.is_number()) throw ArgumentError("model config key '" + key + "' must be a number");
  }
  const auto get = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = j.at(key).get<double>();
  };
  get("p", c.p);
  get("f", c.f);
  get("alpha", c.alpha);
  get("interior_suppression", c.interior_suppression);
  get("a_b", c.a_b);
  get("leak_c", c.leak_c);
  get("a_t", c.a_t);
  get("q_false", c.q_false);
  get("s_fidelity", c.s_fidelity);
  c.validate();
}

struct TrialEvents {
  std::vector<EventKind> kinds;

  std::size_t size() const { return kinds.size(); }
  std::size_t count(EventKind k) const {
    return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), k));
  }
};

/// Activations of every node over `tau` rounds; bits are stored round-major.
struct SyndromeWindow {
  int tau = 1;
  std::size_t nodes = 0;
  std::vector<std::uint8_t> bits;  // [round * nodes + node]
  std::vector<int> counts;

  SyndromeWindow() = default;
  SyndromeWindow(std::size_t n_nodes, int depth)
      : tau(depth), nodes(n_nodes), bits(n_nodes * static_cast<std::size_t>(depth), 0),
        counts(n_nodes, 0) {
    if (depth < 1) throw ArgumentError("tau must be >= 1, got " + std::to_string(depth));
  }

  bool bit(std::size_t node, int round) const {
    return bits[static_cast<std::size_t>(round) * nodes + node] != 0;
  }

  /// Sets a bit and keeps counts in step.
  void set(std::size_t node, int round, bool v) {
    auto& b = bits[static_cast<std::size_t>(round) * nodes + node];
    counts[node] += static_cast<int>(v) - static_cast<int>(b);
    b = v ? 1 : 0;
  }

  /// True when counts agree with bits and lie in [0, tau].
  bool consistent() const {
    for (std::size_t i = 0; i < nodes; ++i) {
      int c = 0;
      for (int r = 0; r < tau; ++r) c += bit(i, r);
      if (c != counts[i] || c < 0 || c > tau) return false;
    }
    return true;
  }
};

/// Multiplier applied to the ternary rate at node i.
inline double coordination_multiplier(const HexCell& cell, std::size_t i, const ModelConfig& cfg) {
  const int coord = cell.coordination(i);
  return coord < 6 ? 1.0 + (6.0 - coord) / 6.0 : cfg.interior_suppression;
}

inline TrialEvents sample_events(const HexCell& cell, const ModelConfig& cfg, Rng& rng) {
  const std::size_t n = cell.size();
  TrialEvents ev{std::vector<EventKind>(n, EventKind::None)};

  const double p_bin = cfg.p * (1.0 - cfg.f);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.bernoulli(p_bin)) ev.kinds[i] = EventKind::Binary;

  const double p_ter = cfg.p * cfg.f;
  for (std::size_t i = 0; i < n; ++i) {
    if (ev.kinds[i] != EventKind::None) continue;
    double m_anti = 1.0;
    for (std::size_t j : cell.neighbors(i))
      if (ev.kinds[j] == EventKind::Ternary) {
        m_anti = 1.0 - cfg.alpha;
        break;
      }
    const double prob = std::clamp(p_ter * coordination_multiplier(cell, i, cfg) * m_anti, 0.0, 1.0);
    if (rng.bernoulli(prob)) ev.kinds[i] = EventKind::Ternary;
  }
  return ev;
}

/// Per round: a Binary node fires with a_b and, when it fires, each neighbour
/// co-fires with leak_c; a Ternary node fires with a_t and never leaks; a
/// quiet node fires with q_false. Activations within a round are OR-ed.
inline SyndromeWindow extract_syndrome(const HexCell& cell, const TrialEvents& events, int tau,
                                       const ModelConfig& cfg, Rng& rng) {
  if (events.size() != cell.size())
    throw ArgumentError("events cover " + std::to_string(events.size()) + " nodes, cell has " +
                        std::to_string(cell.size()));
  const std::size_t n = cell.size();
  SyndromeWindow w(n, tau);
  std::vector<std::uint8_t> act(n);
  for (int r = 0; r < tau; ++r) {
    std::fill(act.begin(), act.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      switch (events.kinds[i]) {
        case EventKind::Binary:
          if (rng.bernoulli(cfg.a_b)) {
            act[i] = 1;
            for (std::size_t j : cell.neighbors(i))
              if (rng.bernoulli(cfg.leak_c)) act[j] = 1;
          }
          break;
        case EventKind::Ternary:
          if (rng.bernoulli(cfg.a_t)) act[i] = 1;
          break;
        case EventKind::None:
          if (rng.bernoulli(cfg.q_false)) act[i] = 1;
          break;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (act[i]) w.set(i, r, true);
  }
  return w;
}

namespace detail {

inline std::vector<DetectorPair> edge_list(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<DetectorPair> out;
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t j : adj[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

inline std::vector<std::vector<std::size_t>> adjacency_of(const HexCell& cell) {
  std::vector<std::vector<std::size_t>> adj(cell.size());
  for (std::size_t i = 0; i < cell.size(); ++i) adj[i] = cell.neighbors(i);
  return adj;
}

inline void check_rate(double rate, const char* what) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw ArgumentError(std::string(what) + " must lie in [0, 1], got " + std::to_string(rate));
}

}  // namespace detail

/// I.i.d. Bernoulli(rate) activations; no adjacency.
inline SyndromeDataset generate_poisson_fixture(std::size_t n_detectors, std::size_t n_shots,
                                                double rate, Rng& rng, std::size_t n_rounds = 1) {
  detail::check_rate(rate, "rate");
  SyndromeDataset ds(n_shots, n_rounds, n_detectors);
  ds.platform = "poisson-fixture";
  for (auto& b : ds.bits) b = rng.bernoulli(rate) ? 1 : 0;
  return ds;
}

/// Sequential edge-mediated activations on an arbitrary graph. Nodes are
/// visited in index order and node i fires with probability
///   clamp(base_rate * (1 + edge_coupling * k_i), 0, 1)
/// where k_i counts already-visited active neighbours in the same round.
/// Negative coupling suppresses co-activation (sub-Poissonian), positive
/// coupling clusters it; zero coupling is the Poisson fixture.
inline SyndromeDataset generate_edge_correlated_fixture(
    const std::vector<std::vector<std::size_t>>& adjacency, std::size_t n_shots, double base_rate,
    double edge_coupling, Rng& rng, std::size_t n_rounds = 1) {
  detail::check_rate(base_rate, "base_rate");
  if (!(edge_coupling >= -1.0 && edge_coupling <= 1.0))
    throw ArgumentError("edge_coupling must lie in [-1, 1], got " + std::to_string(edge_coupling));
  const std::size_t n = adjacency.size();
  SyndromeDataset ds(n_shots, n_rounds, n);
  ds.platform = "edge-fixture";
  ds.adjacency = detail::edge_list(adjacency);
  for (std::size_t s = 0; s < n_shots; ++s)
    for (std::size_t r = 0; r < n_rounds; ++r)
      for (std::size_t i = 0; i < n; ++i) {
        int k = 0;
        for (std::size_t j : adjacency[i])
          if (j < i && ds.at(s, r, j)) ++k;
        const double prob = std::clamp(base_rate * (1.0 + edge_coupling * k), 0.0, 1.0);
        ds.set(s, r, i, rng.bernoulli(prob));
      }
  return ds;
}

inline SyndromeDataset generate_edge_correlated_fixture(const HexCell& cell, std::size_t n_shots,
                                                        double base_rate, double edge_coupling,
                                                        Rng& rng, std::size_t n_rounds = 1) {
  auto ds = generate_edge_correlated_fixture(detail::adjacency_of(cell), n_shots, base_rate,
                                             edge_coupling, rng, n_rounds);
  ds.distance_or_rings = cell.rings();
  return ds;
}

/// Each detector follows a two-state Markov chain across rounds: it keeps its
/// previous state with probability `persistence`, otherwise redraws
/// Bernoulli(rate). persistence = 0 gives independent rounds; larger values
/// add positive cross-round coupling without changing the marginal rate.
inline SyndromeDataset generate_drift_fixture(std::size_t n_detectors, std::size_t n_shots,
                                              std::size_t n_rounds, double rate, double persistence,
                                              Rng& rng) {
  detail::check_rate(rate, "rate");
  detail::check_rate(persistence, "persistence");
  SyndromeDataset ds(n_shots, n_rounds, n_detectors);
  ds.platform = "drift-fixture";
  for (std::size_t s = 0; s < n_shots; ++s)
    for (std::size_t d = 0; d < n_detectors; ++d) {
      bool state = rng.bernoulli(rate);
      ds.set(s, 0, d, state);
      for (std::size_t r = 1; r < n_rounds; ++r) {
        if (!rng.bernoulli(persistence)) state = rng.bernoulli(rate);
        ds.set(s, r, d, state);
      }
    }
  return ds;
}

}  // namespace tqec
