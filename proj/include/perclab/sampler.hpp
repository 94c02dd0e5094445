#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perclab/lattice.hpp"

namespace perclab {

enum class Color : uint8_t { White = 0, Black = 1 };

inline Color opposite(Color c) {
  return c == Color::White ? Color::Black : Color::White;
}

// One sampled coloring of a lattice window. Immutable after creation; the
// color array is a packed bit array (bit set = White).
struct PercConfig {
  Window window;
  double p = 0.0;
  uint64_t seed = 0;
  uint32_t replica = 0;
  std::vector<uint64_t> bits;

  bool white_at(int64_t idx) const {
    return (bits[size_t(idx >> 6)] >> (idx & 63)) & 1u;
  }
  Color color_at(int64_t idx) const {
    return white_at(idx) ? Color::White : Color::Black;
  }
  // Throws if c lies outside the window.
  Color color(LatticeCoord c) const;
};

// Each site is White independently with probability p. The color of a site
// is a pure function of (seed, replica_index, site index): the three are
// mixed through a splitmix64-style finalizer chain, so replicas form
// independent streams and results do not depend on evaluation order.
PercConfig sample(const Window& window, double p, uint64_t seed,
                  uint32_t replica_index);

// Flat binary dump: 32-byte header (magic "PCFG", L_i, L_j as uint32,
// p as IEEE-754 double, seed as uint64, replica_index as uint32) followed by
// the packed bit array.
void dump_config(const PercConfig& cfg, std::ostream& os);
PercConfig load_config(std::istream& is);

namespace detail {

inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t site_hash(uint64_t seed, uint32_t replica, uint64_t idx) {
  return mix64(mix64(mix64(seed) ^ (uint64_t(replica) + 1)) ^ idx);
}

}  // namespace detail

}  // namespace perclab
