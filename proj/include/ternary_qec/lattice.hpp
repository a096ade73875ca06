#pragma once

// Centered-hexagonal lattice patches in axial coordinates.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ternary_qec/errors.hpp"

namespace tqec {

struct AxialCoord {
  int q = 0;
  int r = 0;

  /// Hex distance to the origin.
  int ring() const { return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2; }

  friend bool operator==(const AxialCoord&, const AxialCoord&) = default;
  friend auto operator<=>(const AxialCoord&, const AxialCoord&) = default;
};

/// The six axial neighbour offsets.
inline constexpr std::array<AxialCoord, 6> kHexOffsets{{
    {+1, 0}, {-1, 0}, {0, +1}, {0, -1}, {+1, -1}, {-1, +1}}};

/// Z3 class of an axial site: ((q - r) mod 3) with 0 -> 0, 1 -> +1, 2 -> -1.
/// Every offset in kHexOffsets changes q - r by a non-multiple of 3, so the
/// classes form a proper 3-colouring.
inline int chirality_of(AxialCoord c) {
  const int m = ((c.q - c.r) % 3 + 3) % 3;
  return m == 0 ? 0 : (m == 1 ? +1 : -1);
}

inline constexpr int kMaxRings = 32;

/// Number of sites in a cell with `rings` rings: 3k(k+1)+1.
constexpr std::size_t centered_hex_number(int rings) {
  return static_cast<std::size_t>(3 * rings * (rings + 1) + 1);
}

class HexCell {
 public:
  int rings() const { return rings_; }
  std::size_t size() const { return nodes_.size(); }

  const std::vector<AxialCoord>& nodes() const { return nodes_; }
  const AxialCoord& coord(std::size_t i) const { return nodes_.at(i); }

  /// Sorted neighbour indices of node i.
  const std::vector<std::size_t>& neighbors(std::size_t i) const {
    check_index(i);
    return adjacency_[i];
  }

  int coordination(std::size_t i) const { return static_cast<int>(neighbors(i).size()); }
  bool boundary(std::size_t i) const { return coordination(i) < 6; }
  int chirality(std::size_t i) const {
    check_index(i);
    return chirality_[i];
  }

  /// Undirected edges (i < j), in node order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j : adjacency_[i])
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const HexCell&, const HexCell&) = default;

 private:
  friend HexCell build_cell(int rings);

  void check_index(std::size_t i) const {
    if (i >= nodes_.size())
      throw ArgumentError("node index " + std::to_string(i) + " out of range for cell of " +
                          std::to_string(nodes_.size()) + " nodes");
  }

  int rings_ = 0;
  std::vector<AxialCoord> nodes_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> chirality_;
};

/// Builds a cell with `rings` rings (0..32). Nodes are ordered as a
/// centre-out spiral: the centre, then each ring starting at (-k, +k) and
/// walking counter-clockwise.
inline HexCell build_cell(int rings) {
  if (rings < 0 || rings > kMaxRings)
    throw ArgumentError("rings must lie in [0, " + std::to_string(kMaxRings) + "], got " +
                        std::to_string(rings));

  // Walk order for one ring; together with the start corner this traces the
  // ring exactly once.
  static constexpr std::array<AxialCoord, 6> walk{{
      {+1, 0}, {+1, -1}, {0, -1}, {-1, 0}, {-1, +1}, {0, +1}}};

  HexCell cell;
  cell.rings_ = rings;
  cell.nodes_.reserve(centered_hex_number(rings));
  cell.nodes_.push_back({0, 0});
  for (int k = 1; k <= rings; ++k) {
    AxialCoord cur{-k, +k};
    for (const auto& d : walk) {
      for (int step = 0; step < k; ++step) {
        cell.nodes_.push_back(cur);
        cur.q += d.q;
        cur.r += d.r;
      }
    }
  }

  std::map<AxialCoord, std::size_t> index;
  for (std::size_t i = 0; i < cell.nodes_.size(); ++i) index.emplace(cell.nodes_[i], i);

  cell.adjacency_.resize(cell.nodes_.size());
  cell.chirality_.resize(cell.nodes_.size());
  for (std::size_t i = 0; i < cell.nodes_.size(); ++i) {
    const AxialCoord c = cell.nodes_[i];
    for (const auto& off : kHexOffsets) {
      auto it = index.find({c.q + off.q, c.r + off.r});
      if (it != index.end()) cell.adjacency_[i].push_back(it->second);
    }
    std::sort(cell.adjacency_[i].begin(), cell.adjacency_[i].end());
    cell.chirality_[i] = chirality_of(c);
  }
  return cell;
}

inline const std::vector<std::size_t>& neighbors(const HexCell& cell, std::size_t i) {
  return cell.neighbors(i);
}

inline nlohmann::json to_json(const HexCell& cell) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < cell.size(); ++i) {
    nodes.push_back({{"index", i},
                     {"q", cell.coord(i).q},
                     {"r", cell.coord(i).r},
                     {"coordination", cell.coordination(i)},
                     {"chirality", cell.chirality(i)},
                     {"boundary", cell.boundary(i)},
                     {"neighbors", cell.neighbors(i)}});
  }
  return {{"rings", cell.rings()}, {"node_count", cell.size()}, {"nodes", std::move(nodes)}};
}

}  // namespace tqec
