#include "perclab/sampler.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace perclab {

Color PercConfig::color(LatticeCoord c) const {
  if (!window.contains(c))
    throw std::out_of_range("PercConfig::color: coordinate outside window");
  return color_at(window.index(c));
}

PercConfig sample(const Window& window, double p, uint64_t seed,
                  uint32_t replica_index) {
  if (window.li < 1 || window.lj < 1)
    throw std::invalid_argument("sample: empty window");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample: p not in [0,1]");

  PercConfig cfg;
  cfg.window = window;
  cfg.p = p;
  cfg.seed = seed;
  cfg.replica = replica_index;
  int64_t n = window.site_count();
  cfg.bits.assign(size_t((n + 63) / 64), 0);

  if (p >= 1.0) {
    for (auto& w : cfg.bits) w = ~0ull;
    // clear tail bits past n
    if (n & 63) cfg.bits.back() = (~0ull) >> (64 - (n & 63));
    return cfg;
  }
  if (p <= 0.0) return cfg;

  // threshold compare: white iff hash < p * 2^64
  const auto threshold =
      (unsigned __int128)((long double)p * 18446744073709551616.0L);
  const uint64_t key = detail::mix64(detail::mix64(seed) ^ (uint64_t(replica_index) + 1));
  for (int64_t idx = 0; idx < n; ++idx) {
    uint64_t h = detail::mix64(key ^ uint64_t(idx));
    if ((unsigned __int128)h < threshold)
      cfg.bits[size_t(idx >> 6)] |= (1ull << (idx & 63));
  }
  return cfg;
}

namespace {
constexpr char kMagic[4] = {'P', 'C', 'F', 'G'};
}

void dump_config(const PercConfig& cfg, std::ostream& os) {
  char header[32] = {};
  std::memcpy(header, kMagic, 4);
  uint32_t li = uint32_t(cfg.window.li), lj = uint32_t(cfg.window.lj);
  std::memcpy(header + 4, &li, 4);
  std::memcpy(header + 8, &lj, 4);
  std::memcpy(header + 12, &cfg.p, 8);
  std::memcpy(header + 20, &cfg.seed, 8);
  std::memcpy(header + 28, &cfg.replica, 4);
  os.write(header, 32);
  os.write(reinterpret_cast<const char*>(cfg.bits.data()),
           std::streamsize(cfg.bits.size() * 8));
}

PercConfig load_config(std::istream& is) {
  char header[32];
  is.read(header, 32);
  if (!is || std::memcmp(header, kMagic, 4) != 0)
    throw std::runtime_error("load_config: bad magic");
  PercConfig cfg;
  uint32_t li, lj;
  std::memcpy(&li, header + 4, 4);
  std::memcpy(&lj, header + 8, 4);
  std::memcpy(&cfg.p, header + 12, 8);
  std::memcpy(&cfg.seed, header + 20, 8);
  std::memcpy(&cfg.replica, header + 28, 4);
  cfg.window = {{0, 0}, int64_t(li), int64_t(lj), 1.0};
  int64_t n = cfg.window.site_count();
  cfg.bits.assign(size_t((n + 63) / 64), 0);
  is.read(reinterpret_cast<char*>(cfg.bits.data()),
          std::streamsize(cfg.bits.size() * 8));
  if (!is) throw std::runtime_error("load_config: truncated bit array");
  return cfg;
}

}  // namespace perclab
