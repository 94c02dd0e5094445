#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <queue>
#include <random>
#include <set>

#include "perclab/connectivity.hpp"

using namespace perclab;

namespace {

PercConfig make_config(const Window& w, uint64_t white_mask) {
  PercConfig cfg;
  cfg.window = w;
  cfg.p = 0.5;
  cfg.bits.assign(size_t((w.site_count() + 63) / 64), 0);
  for (int64_t s = 0; s < w.site_count(); ++s)
    if ((white_mask >> s) & 1) cfg.bits[size_t(s >> 6)] |= 1ull << (s & 63);
  return cfg;
}

constexpr std::array<std::pair<int, int>, 6> kNbrs = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};

// Reference reachability: repeated label propagation (deliberately naive).
bool oracle_reach(const std::vector<int64_t>& sites,
                  const std::vector<uint8_t>& is_source,
                  const std::vector<uint8_t>& is_target, int64_t li,
                  const std::set<int64_t>& allowed) {
  std::set<int64_t> frontier;
  for (size_t k = 0; k < sites.size(); ++k)
    if (is_source[k]) frontier.insert(sites[k]);
  std::set<int64_t> reached = frontier;
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<int64_t> next;
    for (int64_t s : reached) {
      int64_t i = s % li, j = s / li;
      for (auto [di, dj] : kNbrs) {
        int64_t t = (j + dj) * li + (i + di);
        if (allowed.count(t) && !reached.count(t)) next.insert(t);
      }
    }
    for (int64_t t : next) {
      reached.insert(t);
      grew = true;
    }
  }
  for (size_t k = 0; k < sites.size(); ++k)
    if (is_target[k] && reached.count(sites[k])) return true;
  return false;
}

// Left-right crossing of an l x l block by flood fill over a raw mask.
bool oracle_crossing(uint64_t mask, int64_t l, bool white) {
  auto occ = [&](int64_t i, int64_t j) {
    return (((mask >> (j * l + i)) & 1) != 0) == white;
  };
  std::vector<uint8_t> seen(size_t(l * l), 0);
  std::queue<std::pair<int64_t, int64_t>> q;
  for (int64_t j = 0; j < l; ++j)
    if (occ(0, j)) {
      seen[size_t(j * l)] = 1;
      q.push({0, j});
    }
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop();
    if (i == l - 1) return true;
    for (auto [di, dj] : kNbrs) {
      int64_t ni = i + di, nj = j + dj;
      if (ni < 0 || ni >= l || nj < 0 || nj >= l) continue;
      if (!seen[size_t(nj * l + ni)] && occ(ni, nj)) {
        seen[size_t(nj * l + ni)] = 1;
        q.push({ni, nj});
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("horizontal crossing matches enumeration on the 4x4 rhombus") {
  Window w{{0, 0}, 4, 4, 1.0};
  int64_t white_hits = 0;
  for (uint64_t mask = 0; mask < (1ull << 16); ++mask) {
    PercConfig cfg = make_config(w, mask);
    bool white = horizontal_crossing(cfg, 4, Color::White);
    bool black = horizontal_crossing(cfg, 4, Color::Black);
    REQUIRE(white == oracle_crossing(mask, 4, true));
    REQUIRE(black == oracle_crossing(mask, 4, false));
    white_hits += white;
  }
  // color symmetry of the enumeration itself
  CHECK(white_hits * 2 <= (1 << 16) * 2);
}

TEST_CASE("P(H(2)) at p=1/2 is exactly 1/2 by enumeration") {
  Window w{{0, 0}, 2, 2, 1.0};
  int hits = 0;
  for (uint64_t mask = 0; mask < 16; ++mask)
    hits += horizontal_crossing(make_config(w, mask), 2, Color::White);
  CHECK(hits == 8);
}

TEST_CASE("cluster labeling matches flood fill on all 3x3 colorings") {
  Window w{{0, 0}, 3, 3, 1.0};
  for (uint64_t mask = 0; mask < 512; ++mask) {
    PercConfig cfg = make_config(w, mask);
    for (Color color : {Color::White, Color::Black}) {
      ClusterLabeling cl = label_clusters(cfg, color);
      // oracle: count components by flood fill
      bool want_white = color == Color::White;
      std::vector<int> lab(9, -1);
      int n = 0;
      for (int64_t s = 0; s < 9; ++s) {
        if (cfg.white_at(s) != want_white || lab[size_t(s)] >= 0) continue;
        std::queue<int64_t> q;
        q.push(s);
        lab[size_t(s)] = n;
        while (!q.empty()) {
          int64_t u = q.front();
          q.pop();
          int64_t i = u % 3, j = u / 3;
          for (auto [di, dj] : kNbrs) {
            int64_t ni = i + di, nj = j + dj;
            if (ni < 0 || ni >= 3 || nj < 0 || nj >= 3) continue;
            int64_t t = nj * 3 + ni;
            if (lab[size_t(t)] < 0 && cfg.white_at(t) == want_white) {
              lab[size_t(t)] = n;
              q.push(t);
            }
          }
        }
        ++n;
      }
      REQUIRE(cl.n_clusters == uint32_t(n));
      // same-label iff same oracle component
      for (int64_t a = 0; a < 9; ++a)
        for (int64_t b = 0; b < 9; ++b)
          if (lab[size_t(a)] >= 0 && lab[size_t(b)] >= 0)
            REQUIRE((cl.label[size_t(a)] == cl.label[size_t(b)]) ==
                    (lab[size_t(a)] == lab[size_t(b)]));
    }
  }
}

TEST_CASE("cluster CSR and bounding boxes are consistent") {
  Window w{{0, 0}, 8, 8, 1.0};
  PercConfig cfg = sample(w, 0.5, 4242, 0);
  ClusterLabeling cl = label_clusters(cfg, Color::White);
  size_t total = 0;
  for (uint32_t c = 0; c < cl.n_clusters; ++c) {
    for (uint32_t k = cl.offsets[c]; k < cl.offsets[c + 1]; ++k) {
      uint32_t s = cl.sites[k];
      CHECK(cl.label[s] == c);
      int32_t i = int32_t(s % 8), j = int32_t(s / 8);
      CHECK(i >= cl.bbox[c][0]);
      CHECK(i <= cl.bbox[c][1]);
      CHECK(j >= cl.bbox[c][2]);
      CHECK(j <= cl.bbox[c][3]);
    }
    total += cl.offsets[c + 1] - cl.offsets[c];
  }
  int64_t whites = 0;
  for (int64_t s = 0; s < 64; ++s) whites += cfg.white_at(s);
  CHECK(int64_t(total) == whites);
}

TEST_CASE("degenerate labelings") {
  Window w{{0, 0}, 5, 5, 1.0};
  PercConfig cfg = make_config(w, (1ull << 25) - 1);
  CHECK(label_clusters(cfg, Color::White).n_clusters == 1);
  CHECK(label_clusters(cfg, Color::Black).n_clusters == 0);
}

namespace {

// 12-site annulus inside a 4x4 window: inner open box holds the 4 center
// sites, outer box holds everything.
struct SmallAnnulus {
  Window w{{0, 0}, 4, 4, 1.0};
  Annulus a;
  std::vector<int64_t> sites;
  std::vector<uint8_t> inner, outer;

  SmallAnnulus() {
    EmbeddedPoint center = {0.5 * (1.5 + 3.0 + 1.5), 1.5 * kSqrt3 / 2.0};
    // axis center (1.5, 1.5)
    center = {1.5 + 0.75, 1.5 * kSqrt3 / 2.0};
    a = Annulus{center, 2.0, 3.0};
    for (int64_t s = 0; s < 16; ++s) {
      LatticeCoord c = w.coord(s);
      EmbeddedPoint p = embed(c, 1.0);
      if (!annulus_contains(a, p)) continue;
      bool in_t = false, out_t = false;
      for (auto [di, dj] : kNbrs) {
        EmbeddedPoint q = embed({c.i + di, c.j + dj}, 1.0);
        if (box_contains_open({a.center, a.r}, q)) in_t = true;
        if (!box_contains({a.center, a.R}, q)) out_t = true;
      }
      sites.push_back(s);
      inner.push_back(in_t);
      outer.push_back(out_t);
    }
  }
};

// Brute-force min vertex cut = max disjoint crossings (Menger).
int64_t oracle_min_cut(const SmallAnnulus& sa, const PercConfig& cfg,
                       bool white) {
  std::vector<size_t> mono;  // positions into sa.sites
  for (size_t k = 0; k < sa.sites.size(); ++k)
    if (cfg.white_at(sa.sites[k]) == white) mono.push_back(k);
  auto blocked = [&](uint64_t removed) {
    std::set<int64_t> allowed;
    std::vector<uint8_t> src(sa.sites.size(), 0), dst(sa.sites.size(), 0);
    for (size_t q = 0; q < mono.size(); ++q)
      if (!((removed >> q) & 1)) allowed.insert(sa.sites[mono[q]]);
    for (size_t k = 0; k < sa.sites.size(); ++k) {
      if (!allowed.count(sa.sites[k])) continue;
      src[k] = sa.inner[k];
      dst[k] = sa.outer[k];
    }
    return !oracle_reach(sa.sites, src, dst, 4, allowed);
  };
  for (int64_t size = 0; size <= int64_t(mono.size()); ++size)
    for (uint64_t rm = 0; rm < (1ull << mono.size()); ++rm)
      if (std::popcount(rm) == size && blocked(rm)) return size;
  return int64_t(mono.size());
}

}  // namespace

TEST_CASE("annulus crossing matches the reachability oracle exhaustively") {
  SmallAnnulus sa;
  REQUIRE(sa.sites.size() == 12);
  for (uint64_t am = 0; am < (1ull << 12); ++am) {
    uint64_t mask = 0;
    for (size_t k = 0; k < 12; ++k)
      if ((am >> k) & 1) mask |= 1ull << sa.sites[k];
    PercConfig cfg = make_config(sa.w, mask);
    for (bool white : {true, false}) {
      std::set<int64_t> allowed;
      std::vector<uint8_t> src(12, 0), dst(12, 0);
      for (size_t k = 0; k < 12; ++k)
        if (cfg.white_at(sa.sites[k]) == white) {
          allowed.insert(sa.sites[k]);
          src[k] = sa.inner[k];
          dst[k] = sa.outer[k];
        }
      bool expect = oracle_reach(sa.sites, src, dst, 4, allowed);
      REQUIRE(annulus_crossing(cfg, sa.a,
                               white ? Color::White : Color::Black) == expect);
    }
  }
}

TEST_CASE("max disjoint crossings equals brute-force Menger on random masks") {
  SmallAnnulus sa;
  std::mt19937_64 rng(5150);
  for (int t = 0; t < 400; ++t) {
    uint64_t am = rng() & 0xfff;
    uint64_t mask = 0;
    for (size_t k = 0; k < 12; ++k)
      if ((am >> k) & 1) mask |= 1ull << sa.sites[k];
    PercConfig cfg = make_config(sa.w, mask);
    for (Color c : {Color::White, Color::Black}) {
      int64_t got = max_disjoint_crossings(cfg, sa.a, c);
      int64_t want = oracle_min_cut(sa, cfg, c == Color::White);
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("disjoint crossing certificate is a valid Menger witness") {
  SmallAnnulus sa;
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    uint64_t am = rng() & 0xfff;
    uint64_t mask = 0;
    for (size_t k = 0; k < 12; ++k)
      if ((am >> k) & 1) mask |= 1ull << sa.sites[k];
    PercConfig cfg = make_config(sa.w, mask);
    DisjointCrossingCertificate cert =
        disjoint_crossing_certificate(cfg, sa.a, Color::White);
    CHECK(int64_t(cert.paths.size()) == cert.k);
    CHECK(int64_t(cert.cut.size()) == cert.k);
    // paths vertex-disjoint, white, inside the annulus, inner to outer
    std::set<uint32_t> used;
    auto slot_of = [&](uint32_t s) {
      for (size_t k = 0; k < sa.sites.size(); ++k)
        if (sa.sites[k] == int64_t(s)) return k;
      REQUIRE(false);
      return size_t(0);
    };
    for (const auto& path : cert.paths) {
      REQUIRE(!path.empty());
      CHECK(sa.inner[slot_of(path.front())]);
      CHECK(sa.outer[slot_of(path.back())]);
      for (size_t q = 0; q < path.size(); ++q) {
        CHECK(cfg.white_at(path[q]));
        CHECK(used.insert(path[q]).second);
        if (q > 0) {
          int64_t a = path[q - 1], b = path[q];
          int64_t di = b % 4 - a % 4, dj = b / 4 - a / 4;
          bool adjacent = false;
          for (auto [xi, xj] : kNbrs) adjacent |= (di == xi && dj == xj);
          CHECK(adjacent);
        }
      }
    }
    // removing the cut blocks all crossings
    std::set<int64_t> allowed;
    std::vector<uint8_t> src(12, 0), dst(12, 0);
    std::set<uint32_t> cut(cert.cut.begin(), cert.cut.end());
    for (size_t k = 0; k < 12; ++k)
      if (cfg.white_at(sa.sites[k]) && !cut.count(uint32_t(sa.sites[k]))) {
        allowed.insert(sa.sites[k]);
        src[k] = sa.inner[k];
        dst[k] = sa.outer[k];
      }
    CHECK(!oracle_reach(sa.sites, src, dst, 4, allowed));
  }
}

TEST_CASE("all-white annulus saturates; early cap stops the search") {
  SmallAnnulus sa;
  PercConfig cfg = make_config(sa.w, 0xffff);
  int64_t full = max_disjoint_crossings(cfg, sa.a, Color::White);
  CHECK(full == oracle_min_cut(sa, cfg, true));
  CHECK(full >= 1);
  CHECK(max_disjoint_crossings(cfg, sa.a, Color::White, 1) == 1);
  CHECK(max_disjoint_crossings(cfg, sa.a, Color::Black) == 0);
}

TEST_CASE("surrounding black circuit: degenerate densities") {
  for (int64_t l : {5, 9}) {
    Window w{{0, 0}, l, l, 1.0};
    EmbeddedPoint x = embed({l / 2, l / 2}, 1.0);
    PercConfig black = make_config(w, 0);
    auto d = black_circuit_surrounding(black, x);
    REQUIRE(d.has_value());
    CHECK(*d == doctest::Approx(double(l - 1)));  // grows with the window
    PercConfig white = make_config(w, ~0ull);
    CHECK(!black_circuit_surrounding(white, x).has_value());
  }
}

TEST_CASE("surrounding black circuit: hand-built hexagonal ring") {
  Window w{{0, 0}, 9, 9, 1.0};
  LatticeCoord c{4, 4};
  uint64_t unused = 0;
  (void)unused;
  PercConfig cfg = make_config(w, 0);
  // start all white, then blacken the 6 neighbors of c
  for (auto& word : cfg.bits) word = ~0ull;
  auto set_black = [&](LatticeCoord s) {
    int64_t idx = w.index(s);
    cfg.bits[size_t(idx >> 6)] &= ~(1ull << (idx & 63));
  };
  for (LatticeCoord n : neighbors(c)) set_black(n);
  EmbeddedPoint x = embed(c, 1.0);
  auto d = black_circuit_surrounding(cfg, x);
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(2.0));  // opposite ring sites
}

TEST_CASE("margin rule rejects near-boundary centers") {
  Window w{{0, 0}, 16, 16, 1.0};
  PercConfig cfg = make_config(w, 0);
  CHECK_THROWS(black_circuit_surrounding(cfg, embed({1, 8}, 1.0)));
  CHECK_THROWS(black_cluster_diam_at(cfg, embed({8, 15}, 1.0)));
  CHECK_NOTHROW(black_circuit_surrounding(cfg, embed({8, 8}, 1.0)));
}

TEST_CASE("black cluster diameter at a point") {
  Window w{{0, 0}, 9, 9, 1.0};
  PercConfig cfg = make_config(w, 0);
  for (auto& word : cfg.bits) word = ~0ull;
  auto set_black = [&](LatticeCoord s) {
    int64_t idx = w.index(s);
    cfg.bits[size_t(idx >> 6)] &= ~(1ull << (idx & 63));
  };
  set_black({3, 4});
  set_black({4, 4});
  set_black({5, 4});
  auto d = black_cluster_diam_at(cfg, embed({4, 4}, 1.0));
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(2.0));
  CHECK(!black_cluster_diam_at(cfg, embed({4, 5}, 1.0)).has_value());
}

TEST_CASE("site_containing picks the nearest center") {
  Window w{{0, 0}, 8, 8, 1.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-0.28, 0.28);
  for (int t = 0; t < 200; ++t) {
    LatticeCoord c{int64_t(rng() % 6) + 1, int64_t(rng() % 6) + 1};
    EmbeddedPoint p = embed(c, 1.0);
    LatticeCoord got = site_containing(w, {p.x + jitter(rng), p.y + jitter(rng)});
    CHECK(got == c);
  }
}

TEST_CASE("event descriptors build runnable events") {
  Window w{{0, 0}, 16, 16, 1.0};
  EventDescriptor h{"H", 16};
  EventStats s = estimate_event(h.name(), w, 1.0, 50, 1, 1, make_event(h, w));
  CHECK(s.p_hat == 1.0);
  EventDescriptor cb{"Cb", 0, 3.0, 6.0};
  EventStats sb = estimate_event(cb.name(), w, 1.0, 50, 1, 1, make_event(cb, w));
  CHECK(sb.p_hat == 0.0);
  CHECK_THROWS(make_event(EventDescriptor{"Z"}, w));
}

TEST_CASE("crossing probability is monotone in p within 3 sigma") {
  Window w{{0, 0}, 12, 12, 1.0};
  auto ev = [](const PercConfig& cfg) {
    return EventOutcome{horizontal_crossing(cfg, 12, Color::White), false};
  };
  EventStats lo = estimate_event("H", w, 0.45, 3000, 8, 1, ev);
  EventStats hi = estimate_event("H", w, 0.55, 3000, 9, 1, ev);
  CHECK(hi.p_hat - lo.p_hat > -3.0 * std::sqrt(lo.ci95 * lo.ci95 + hi.ci95 * hi.ci95) / 1.96);
}
