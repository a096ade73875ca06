#pragma once

// JSONL syndrome-record format, version 1.
//
//   line 1   header: {"format_version":1, "platform":..., "distance_or_rings":...,
//                     "shots":..., "rounds":..., "detectors":...,
//                     "adjacency":[[a,b],...] | null, "metadata":{...}}
//   line k+2 shot k: {"shot":k, "rounds":["<hex>", ...]}
//
// Each round is ceil(detectors/8) bytes written as lowercase hex, byte 0
// first; bit j of byte b is detector 8b + j.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ternary_qec/dataset.hpp"
#include "ternary_qec/error_model.hpp"
#include "ternary_qec/errors.hpp"
#include "ternary_qec/lattice.hpp"
#include "ternary_qec/rng.hpp"

namespace tqec {

inline constexpr int kDatasetFormatVersion = 1;

inline std::size_t packed_hex_length(std::size_t detectors) { return 2 * ((detectors + 7) / 8); }

/// Packs one round of detector bits, little-endian within and across bytes.
inline std::string pack_round(const std::uint8_t* bits, std::size_t detectors) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(packed_hex_length(detectors));
  for (std::size_t base = 0; base < detectors; base += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8 && base + j < detectors; ++j)
      if (bits[base + j]) byte |= 1u << j;
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0xf]);
  }
  return out;
}

inline std::string pack_round(const std::vector<std::uint8_t>& bits) { return pack_round(bits.data(), bits.size()); }

namespace detail {

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

/// Inverse of pack_round. Throws ValidationError on a length mismatch or set
/// padding bits and ArgumentError on a non-hex character.
inline void unpack_round(std::string_view hex, std::size_t detectors, std::uint8_t* out) {
  if (hex.size() != packed_hex_length(detectors))
    throw ValidationError("round string has " + std::to_string(hex.size()) + " hex chars, expected " +
                          std::to_string(packed_hex_length(detectors)));
  for (std::size_t b = 0; b < hex.size() / 2; ++b) {
    const int hi = detail::hex_value(hex[2 * b]), lo = detail::hex_value(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw ArgumentError("invalid hex character in round string");
    const unsigned byte = static_cast<unsigned>(hi << 4 | lo);
    for (std::size_t j = 0; j < 8; ++j) {
      const std::size_t d = 8 * b + j;
      const bool bit = (byte >> j) & 1u;
      if (d < detectors)
        out[d] = bit ? 1 : 0;
      else if (bit)
        throw ValidationError("padding bit set beyond detector " + std::to_string(detectors - 1));
    }
  }
}

inline nlohmann::json dataset_header(const SyndromeDataset& ds) {
  nlohmann::json h{{"format_version", kDatasetFormatVersion},
                   {"platform", ds.platform},
                   {"distance_or_rings", ds.distance_or_rings},
                   {"shots", ds.shots},
                   {"rounds", ds.rounds},
                   {"detectors", ds.detectors},
                   {"adjacency", nullptr},
                   {"metadata", ds.metadata}};
  if (ds.adjacency) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : *ds.adjacency) pairs.push_back({a, b});
    h["adjacency"] = std::move(pairs);
  }
  return h;
}

inline void write_dataset(const SyndromeDataset& ds, std::ostream& os) {
  ds.validate();
  os << dataset_header(ds).dump() << '\n';
  for (std::size_t s = 0; s < ds.shots; ++s) {
    nlohmann::json rounds = nlohmann::json::array();
    for (std::size_t r = 0; r < ds.rounds; ++r) rounds.push_back(pack_round(&ds.bits[ds.offset(s, r, 0)], ds.detectors));
    os << nlohmann::json{{"shot", s}, {"rounds", std::move(rounds)}}.dump() << '\n';
  }
  if (!os) throw IoError("failed while writing dataset");
}

inline void write_dataset(const SyndromeDataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_dataset(ds, os);
}

namespace detail {

inline std::size_t header_size(const nlohmann::json& h, const char* key, std::size_t line) {
  if (!h.contains(key) || !h[key].is_number_unsigned())
    throw ParseError(line, std::string("header field '") + key + "' must be a non-negative integer");
  return h[key].get<std::size_t>();
}

}  // namespace detail

inline SyndromeDataset read_dataset(std::istream& is) {
  std::string text;
  std::size_t line_no = 0;
  if (!std::getline(is, text)) throw ParseError(1, "missing header line");
  ++line_no;

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed header: ") + e.what());
  }
  if (!h.is_object()) throw ParseError(line_no, "header must be a JSON object");
  if (!h.contains("format_version") || !h["format_version"].is_number_integer())
    throw ParseError(line_no, "header lacks an integer format_version");
  if (h["format_version"].get<int>() != kDatasetFormatVersion)
    throw ValidationError("unsupported format_version " + h["format_version"].dump());

  SyndromeDataset ds(detail::header_size(h, "shots", line_no), detail::header_size(h, "rounds", line_no),
                     detail::header_size(h, "detectors", line_no));
  try {
    ds.platform = h.value("platform", std::string{});
    ds.distance_or_rings = h.value("distance_or_rings", 0);
    if (h.contains("metadata") && !h["metadata"].is_null())
      ds.metadata = h["metadata"].get<std::map<std::string, std::string>>();
    if (h.contains("adjacency") && !h["adjacency"].is_null()) {
      std::vector<DetectorPair> pairs;
      for (const auto& p : h["adjacency"]) {
        if (!p.is_array() || p.size() != 2) throw ParseError(line_no, "adjacency entries must be [a, b] pairs");
        pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
      }
      ds.adjacency = std::move(pairs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, std::string("bad header field: ") + e.what());
  }
  ds.validate();

  std::size_t shot = 0;
  while (std::getline(is, text)) {
    ++line_no;
    if (text.empty() || text == "\r") continue;
    if (shot >= ds.shots)
      throw ValidationError("more shot lines than the header's " + std::to_string(ds.shots) + " shots (line " +
                            std::to_string(line_no) + ")");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("malformed shot line: ") + e.what());
    }
    if (!j.is_object() || !j.contains("shot") || !j["shot"].is_number_unsigned() || !j.contains("rounds") ||
        !j["rounds"].is_array())
      throw ParseError(line_no, "shot line must be {\"shot\": n, \"rounds\": [...]}");
    if (j["shot"].get<std::size_t>() != shot)
      throw ValidationError("line " + std::to_string(line_no) + ": expected shot " + std::to_string(shot) +
                            ", found " + j["shot"].dump());
    const auto& rounds = j["rounds"];
    if (rounds.size() != ds.rounds)
      throw ValidationError("line " + std::to_string(line_no) + ": " + std::to_string(rounds.size()) +
                            " rounds, header says " + std::to_string(ds.rounds));
    for (std::size_t r = 0; r < ds.rounds; ++r) {
      if (!rounds[r].is_string()) throw ParseError(line_no, "round entries must be hex strings");
      try {
        unpack_round(rounds[r].get_ref<const std::string&>(), ds.detectors, &ds.bits[ds.offset(shot, r, 0)]);
      } catch (const ArgumentError& e) {
        throw ParseError(line_no, e.what());
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    ++shot;
  }
  if (shot != ds.shots)
    throw ValidationError("found " + std::to_string(shot) + " shot lines, header says " + std::to_string(ds.shots));
  return ds;
}

inline SyndromeDataset read_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_dataset(is);
}

/// One shot per window: detectors are the cell nodes, rounds the window depth.
inline SyndromeDataset from_simulation(const HexCell& cell, const std::vector<SyndromeWindow>& windows,
                                       const std::map<std::string, std::string>& meta = {}) {
  if (windows.empty()) throw ArgumentError("from_simulation needs at least one window");
  const int tau = windows.front().tau;
  SyndromeDataset ds(windows.size(), static_cast<std::size_t>(tau), cell.size());
  ds.platform = "simulation";
  ds.distance_or_rings = cell.rings();
  ds.metadata = meta;
  ds.adjacency = cell.edges();
  for (std::size_t s = 0; s < windows.size(); ++s) {
    const auto& w = windows[s];
    if (w.tau != tau)
      throw ArgumentError("window " + std::to_string(s) + " has tau " + std::to_string(w.tau) + ", expected " +
                          std::to_string(tau));
    if (w.nodes != cell.size()) throw ArgumentError("window " + std::to_string(s) + " does not match the cell");
    for (int r = 0; r < tau; ++r)
      for (std::size_t i = 0; i < cell.size(); ++i) ds.set(s, static_cast<std::size_t>(r), i, w.bit(i, r));
  }
  return ds;
}

/// Samples `shots` independent trials of the mixed model and packs their
/// windows; shot k uses the stream derive_seed(seed, k).
inline SyndromeDataset simulate_dataset(const HexCell& cell, const ModelConfig& cfg, int tau, std::size_t shots,
                                        std::uint64_t seed) {
  std::vector<SyndromeWindow> windows;
  windows.reserve(shots);
  for (std::size_t k = 0; k < shots; ++k) {
    Rng rng(derive_seed(seed, k));
    const TrialEvents ev = sample_events(cell, cfg, rng);
    windows.push_back(extract_syndrome(cell, ev, tau, cfg, rng));
  }
  return from_simulation(cell, windows, {{"seed", std::to_string(seed)}});
}

}  // namespace tqec
