#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ternary_qec/errors.hpp"

namespace tqec {

using DetectorPair = std::pair<std::size_t, std::size_t>;

/// shots x rounds x detectors binary syndrome record, plus metadata.
/// Common input of every statistics operation.
struct SyndromeDataset {
  std::string platform = "synthetic";
  int distance_or_rings = 0;
  std::size_t shots = 0;
  std::size_t rounds = 0;
  std::size_t detectors = 0;
  std::vector<std::uint8_t> bits;  // row-major [shot][round][detector]
  std::optional<std::vector<DetectorPair>> adjacency;
  std::map<std::string, std::string> metadata;

  SyndromeDataset() = default;
  SyndromeDataset(std::size_t n_shots, std::size_t n_rounds, std::size_t n_detectors)
      : shots(n_shots), rounds(n_rounds), detectors(n_detectors),
        bits(n_shots * n_rounds * n_detectors, 0) {}

  std::size_t offset(std::size_t s, std::size_t r, std::size_t d) const {
    return (s * rounds + r) * detectors + d;
  }
  bool at(std::size_t s, std::size_t r, std::size_t d) const { return bits[offset(s, r, d)] != 0; }
  void set(std::size_t s, std::size_t r, std::size_t d, bool v) { bits[offset(s, r, d)] = v ? 1 : 0; }

  /// Activations in one (shot, round).
  std::size_t round_count(std::size_t s, std::size_t r) const {
    std::size_t n = 0;
    const std::size_t base = offset(s, r, 0);
    for (std::size_t d = 0; d < detectors; ++d) n += bits[base + d];
    return n;
  }

  /// Activations in a shot summed over the first `n_rounds` rounds (all rounds by default).
  std::size_t shot_count(std::size_t s, std::optional<std::size_t> n_rounds = std::nullopt) const {
    const std::size_t upto = n_rounds.value_or(rounds);
    std::size_t n = 0;
    for (std::size_t r = 0; r < upto; ++r) n += round_count(s, r);
    return n;
  }

  std::vector<double> shot_counts() const {
    std::vector<double> out(shots);
    for (std::size_t s = 0; s < shots; ++s) out[s] = static_cast<double>(shot_count(s));
    return out;
  }

  /// Throws ValidationError when dimensions or adjacency are inconsistent.
  void validate() const {
    if (shots == 0 || rounds == 0 || detectors == 0)
      throw ValidationError("dataset dimensions must be positive");
    if (bits.size() != shots * rounds * detectors)
      throw ValidationError("bit buffer size " + std::to_string(bits.size()) +
                            " does not match shots*rounds*detectors");
    if (adjacency) {
      for (const auto& [a, b] : *adjacency)
        if (a >= detectors || b >= detectors || a == b)
          throw ValidationError("adjacency pair (" + std::to_string(a) + "," + std::to_string(b) +
                                ") invalid for " + std::to_string(detectors) + " detectors");
    }
  }

  friend bool operator==(const SyndromeDataset&, const SyndromeDataset&) = default;
};

}  // namespace tqec
