#include "perclab/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "perclab/interface_loops.hpp"
#include "perclab/parallel.hpp"

namespace perclab {

namespace {

struct UnionFind {
  std::vector<uint32_t> parent;

  explicit UnionFind(size_t n) : parent(n) {
    for (size_t k = 0; k < n; ++k) parent[k] = uint32_t(k);
  }
  uint32_t find(uint32_t x) {
    uint32_t root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      uint32_t next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Forward neighbor offsets covering each adjacency pair once.
constexpr std::array<std::pair<int, int>, 3> kForward = {
    {{1, 0}, {0, 1}, {-1, 1}}};

constexpr std::array<std::pair<int, int>, 6> kAllNbrs = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};

}  // namespace

ClusterLabeling label_clusters(const PercConfig& cfg, Color color) {
  const int64_t li = cfg.window.li, lj = cfg.window.lj;
  const int64_t n = li * lj;
  const bool want_white = (color == Color::White);
  UnionFind uf{size_t(n)};
  for (int64_t j = 0; j < lj; ++j)
    for (int64_t i = 0; i < li; ++i) {
      int64_t s = j * li + i;
      if (cfg.white_at(s) != want_white) continue;
      for (auto [di, dj] : kForward) {
        int64_t ni = i + di, nj = j + dj;
        if (ni < 0 || ni >= li || nj >= lj) continue;
        int64_t t = nj * li + ni;
        if (cfg.white_at(t) == want_white) uf.unite(uint32_t(s), uint32_t(t));
      }
    }

  ClusterLabeling cl;
  cl.color = color;
  cl.label.assign(size_t(n), kNoCluster);
  std::vector<uint32_t> root_to_cluster(size_t(n), kNoCluster);
  for (int64_t s = 0; s < n; ++s) {
    if (cfg.white_at(s) != want_white) continue;
    uint32_t r = uf.find(uint32_t(s));
    if (root_to_cluster[r] == kNoCluster) {
      root_to_cluster[r] = cl.n_clusters++;
      cl.bbox.push_back({int32_t(li), -1, int32_t(lj), -1});
    }
    uint32_t c = root_to_cluster[r];
    cl.label[size_t(s)] = c;
    auto& bb = cl.bbox[c];
    int32_t i = int32_t(s % li), j = int32_t(s / li);
    bb[0] = std::min(bb[0], i);
    bb[1] = std::max(bb[1], i);
    bb[2] = std::min(bb[2], j);
    bb[3] = std::max(bb[3], j);
  }
  // CSR site lists
  cl.offsets.assign(size_t(cl.n_clusters) + 1, 0);
  for (int64_t s = 0; s < n; ++s)
    if (cl.label[size_t(s)] != kNoCluster) ++cl.offsets[cl.label[size_t(s)] + 1];
  for (size_t c = 1; c < cl.offsets.size(); ++c) cl.offsets[c] += cl.offsets[c - 1];
  cl.sites.resize(cl.offsets.back());
  std::vector<uint32_t> cursor(cl.offsets.begin(), cl.offsets.end() - 1);
  for (int64_t s = 0; s < n; ++s) {
    uint32_t c = cl.label[size_t(s)];
    if (c != kNoCluster) cl.sites[cursor[c]++] = uint32_t(s);
  }
  return cl;
}

double ClusterLabeling::cluster_diameter(uint32_t cluster, const Window& w) const {
  std::vector<EmbeddedPoint> pts;
  for (uint32_t k = offsets[cluster]; k < offsets[cluster + 1]; ++k)
    pts.push_back(embed(w.coord(sites[k]), w.delta));
  return diam(pts);
}

bool block_crossing(const PercConfig& cfg, int64_t i0, int64_t j0, int64_t l1,
                    int64_t l2, Color color) {
  const int64_t li = cfg.window.li, lj = cfg.window.lj;
  if (l1 < 1 || l2 < 1 || i0 < 0 || j0 < 0 || i0 + l1 > li || j0 + l2 > lj)
    throw std::invalid_argument("block_crossing: block exceeds window");
  const bool want_white = (color == Color::White);
  UnionFind uf{size_t(l1 * l2)};
  auto occupied = [&](int64_t bi, int64_t bj) {
    return cfg.white_at((j0 + bj) * li + (i0 + bi)) == want_white;
  };
  for (int64_t bj = 0; bj < l2; ++bj)
    for (int64_t bi = 0; bi < l1; ++bi) {
      if (!occupied(bi, bj)) continue;
      for (auto [di, dj] : kForward) {
        int64_t ni = bi + di, nj = bj + dj;
        if (ni < 0 || ni >= l1 || nj >= l2) continue;
        if (occupied(ni, nj))
          uf.unite(uint32_t(bj * l1 + bi), uint32_t(nj * l1 + ni));
      }
    }
  std::vector<bool> left_root(size_t(l1 * l2), false);
  bool any = false;
  for (int64_t bj = 0; bj < l2; ++bj)
    if (occupied(0, bj)) {
      left_root[uf.find(uint32_t(bj * l1))] = true;
      any = true;
    }
  if (!any) return false;
  for (int64_t bj = 0; bj < l2; ++bj)
    if (occupied(l1 - 1, bj) && left_root[uf.find(uint32_t(bj * l1 + l1 - 1))])
      return true;
  return false;
}

bool horizontal_crossing(const PercConfig& cfg, int64_t n, Color color) {
  if (n < 1) throw std::invalid_argument("horizontal_crossing: n < 1");
  if (n > cfg.window.li || n > cfg.window.lj)
    throw std::invalid_argument("horizontal_crossing: box exceeds window");
  return block_crossing(cfg, 0, 0, n, n, color);
}

namespace {

// Sites of the closed annulus plus inner/outer contact flags. Contact is
// geometric: a lattice neighbor position strictly inside the inner box
// (resp. strictly outside the outer box).
struct AnnulusSites {
  std::vector<uint32_t> sites;            // window site indices
  std::vector<uint8_t> inner_touch, outer_touch;  // parallel to sites
  std::vector<int32_t> slot;              // per window site; -1 if absent
};

AnnulusSites annulus_sites(const PercConfig& cfg, const Annulus& a) {
  const Window& w = cfg.window;
  if (!(a.r > 0 && a.r < a.R))
    throw std::invalid_argument("annulus: need 0 < r < R");
  EmbeddedPoint c = axis_coords(a.center);
  double d = w.delta;
  double alo = d * double(w.origin.i), ahi = d * double(w.origin.i + w.li - 1);
  double blo = d * double(w.origin.j), bhi = d * double(w.origin.j + w.lj - 1);
  double h = a.R / 2.0;
  if (c.x - h < alo - 1e-9 || c.x + h > ahi + 1e-9 || c.y - h < blo - 1e-9 ||
      c.y + h > bhi + 1e-9)
    throw std::invalid_argument("annulus exceeds window");

  AnnulusSites out;
  out.slot.assign(size_t(w.site_count()), -1);
  int64_t ilo = int64_t(std::ceil((c.x - h) / d - 1e-9)) - w.origin.i;
  int64_t ihi = int64_t(std::floor((c.x + h) / d + 1e-9)) - w.origin.i;
  int64_t jlo = int64_t(std::ceil((c.y - h) / d - 1e-9)) - w.origin.j;
  int64_t jhi = int64_t(std::floor((c.y + h) / d + 1e-9)) - w.origin.j;
  Box inner{a.center, a.r};
  Box outer{a.center, a.R};
  for (int64_t j = jlo; j <= jhi; ++j)
    for (int64_t i = ilo; i <= ihi; ++i) {
      LatticeCoord abs{w.origin.i + i, w.origin.j + j};
      EmbeddedPoint p = embed(abs, d);
      if (!annulus_contains(a, p)) continue;
      bool in_touch = false, out_touch = false;
      for (auto [di, dj] : kAllNbrs) {
        EmbeddedPoint q = embed({abs.i + di, abs.j + dj}, d);
        if (box_contains_open(inner, q)) in_touch = true;
        if (!box_contains(outer, q)) out_touch = true;
      }
      out.slot[size_t(j * w.li + i)] = int32_t(out.sites.size());
      out.sites.push_back(uint32_t(j * w.li + i));
      out.inner_touch.push_back(in_touch);
      out.outer_touch.push_back(out_touch);
    }
  return out;
}

}  // namespace

bool annulus_crossing(const PercConfig& cfg, const Annulus& a, Color color) {
  AnnulusSites as = annulus_sites(cfg, a);
  const bool want_white = (color == Color::White);
  const int64_t li = cfg.window.li;
  std::vector<uint8_t> seen(as.sites.size(), 0);
  std::queue<uint32_t> q;  // slots
  for (size_t k = 0; k < as.sites.size(); ++k)
    if (as.inner_touch[k] && cfg.white_at(as.sites[k]) == want_white) {
      seen[k] = 1;
      q.push(uint32_t(k));
    }
  while (!q.empty()) {
    uint32_t k = q.front();
    q.pop();
    if (as.outer_touch[k]) return true;
    int64_t s = as.sites[k];
    int64_t i = s % li, j = s / li;
    for (auto [di, dj] : kAllNbrs) {
      int64_t ni = i + di, nj = j + dj;
      if (ni < 0 || ni >= li || nj < 0 || nj >= cfg.window.lj) continue;
      int32_t slot = as.slot[size_t(nj * li + ni)];
      if (slot < 0 || seen[size_t(slot)]) continue;
      if (cfg.white_at(nj * li + ni) != want_white) continue;
      seen[size_t(slot)] = 1;
      q.push(uint32_t(slot));
    }
  }
  return false;
}

namespace {

// Unit-vertex-capacity max flow between the inner and outer contact sets.
// Node 2k = in-node of slot k, 2k+1 = out-node; plus source S and sink T.
struct VertexFlow {
  const PercConfig& cfg;
  AnnulusSites as;
  bool want_white;
  int n_nodes;
  int S, T;
  struct Arc {
    int to;
    int cap;
    int rev;
    bool fwd;
  };
  std::vector<std::vector<Arc>> adj;

  VertexFlow(const PercConfig& c, const Annulus& a, Color color)
      : cfg(c), as(annulus_sites(c, a)), want_white(color == Color::White) {
    int m = int(as.sites.size());
    n_nodes = 2 * m + 2;
    S = 2 * m;
    T = 2 * m + 1;
    adj.resize(size_t(n_nodes));
    const int64_t li = cfg.window.li;
    // Source/sink arcs are unbounded so the min cut falls on vertex arcs.
    constexpr int kInf = 1 << 30;
    for (int k = 0; k < m; ++k) {
      if (cfg.white_at(as.sites[size_t(k)]) != want_white) continue;
      add_arc(2 * k, 2 * k + 1, 1);  // vertex capacity
      if (as.inner_touch[size_t(k)]) add_arc(S, 2 * k, kInf);
      if (as.outer_touch[size_t(k)]) add_arc(2 * k + 1, T, kInf);
      int64_t s = as.sites[size_t(k)];
      int64_t i = s % li, j = s / li;
      for (auto [di, dj] : kAllNbrs) {
        int64_t ni = i + di, nj = j + dj;
        if (ni < 0 || ni >= li || nj < 0 || nj >= cfg.window.lj) continue;
        int32_t slot = as.slot[size_t(nj * li + ni)];
        if (slot < 0) continue;
        if (cfg.white_at(nj * li + ni) != want_white) continue;
        add_arc(2 * k + 1, 2 * slot, 1);
      }
    }
  }

  void add_arc(int u, int v, int cap) {
    adj[size_t(u)].push_back({v, cap, int(adj[size_t(v)].size()), true});
    adj[size_t(v)].push_back({u, 0, int(adj[size_t(u)].size()) - 1, false});
  }

  // One BFS augmentation; returns false when no augmenting path exists.
  bool augment() {
    std::vector<std::pair<int, int>> pred(size_t(n_nodes), {-1, -1});
    std::queue<int> q;
    q.push(S);
    pred[size_t(S)] = {S, -1};
    while (!q.empty() && pred[size_t(T)].first == -1) {
      int u = q.front();
      q.pop();
      for (size_t e = 0; e < adj[size_t(u)].size(); ++e) {
        const Arc& arc = adj[size_t(u)][e];
        if (arc.cap <= 0 || pred[size_t(arc.to)].first != -1) continue;
        pred[size_t(arc.to)] = {u, int(e)};
        q.push(arc.to);
      }
    }
    if (pred[size_t(T)].first == -1) return false;
    int v = T;
    while (v != S) {
      auto [u, e] = pred[size_t(v)];
      Arc& arc = adj[size_t(u)][size_t(e)];
      arc.cap -= 1;
      adj[size_t(arc.to)][size_t(arc.rev)].cap += 1;
      v = u;
    }
    return true;
  }

  int64_t run(int64_t cap_limit) {
    int64_t flow = 0;
    while (cap_limit < 0 || flow < cap_limit) {
      if (!augment()) break;
      ++flow;
    }
    return flow;
  }

  // After a full run: residual-reachable set from S gives the min vertex cut
  // (slots whose in-node is reachable but out-node is not).
  std::vector<uint32_t> min_cut() const {
    std::vector<uint8_t> reach(size_t(n_nodes), 0);
    std::queue<int> q;
    q.push(S);
    reach[size_t(S)] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& arc : adj[size_t(u)])
        if (arc.cap > 0 && !reach[size_t(arc.to)]) {
          reach[size_t(arc.to)] = 1;
          q.push(arc.to);
        }
    }
    std::vector<uint32_t> cut;
    for (size_t k = 0; k < as.sites.size(); ++k)
      if (reach[2 * k] && !reach[2 * k + 1]) cut.push_back(as.sites[k]);
    return cut;
  }

  // Decompose the integral flow into vertex-disjoint site paths. The flow
  // carried by a forward arc equals its reverse arc's residual capacity;
  // the walk consumes flow as it goes.
  std::vector<std::vector<uint32_t>> paths() {
    auto flow_of = [&](const Arc& arc) {
      return arc.fwd ? adj[size_t(arc.to)][size_t(arc.rev)].cap : 0;
    };
    auto consume = [&](Arc& arc) {
      arc.cap += 1;
      adj[size_t(arc.to)][size_t(arc.rev)].cap -= 1;
    };
    std::vector<std::vector<uint32_t>> out;
    for (Arc& src : adj[size_t(S)]) {
      while (src.fwd && flow_of(src) > 0) {
        std::vector<uint32_t> path;
        consume(src);
        int u = src.to;  // in-node
        while (u != T) {
          if ((u & 1) == 0) path.push_back(as.sites[size_t(u / 2)]);
          int next = -1;
          for (Arc& arc : adj[size_t(u)]) {
            if (flow_of(arc) > 0) {
              consume(arc);
              next = arc.to;
              break;
            }
          }
          if (next < 0) throw std::logic_error("flow decomposition failed");
          u = next;
        }
        out.push_back(std::move(path));
      }
    }
    return out;
  }
};

}  // namespace

int64_t max_disjoint_crossings(const PercConfig& cfg, const Annulus& a,
                               Color color, int64_t cap) {
  VertexFlow vf(cfg, a, color);
  return vf.run(cap);
}

DisjointCrossingCertificate disjoint_crossing_certificate(const PercConfig& cfg,
                                                          const Annulus& a,
                                                          Color color) {
  VertexFlow vf(cfg, a, color);
  DisjointCrossingCertificate cert;
  cert.k = vf.run(-1);
  cert.cut = vf.min_cut();
  cert.paths = vf.paths();
  return cert;
}

LatticeCoord site_containing(const Window& w, EmbeddedPoint x) {
  EmbeddedPoint a = axis_coords(x);
  int64_t i0 = int64_t(std::llround(a.x / w.delta));
  int64_t j0 = int64_t(std::llround(a.y / w.delta));
  LatticeCoord best{i0, j0};
  double best_d = std::numeric_limits<double>::infinity();
  for (int64_t dj = -1; dj <= 1; ++dj)
    for (int64_t di = -1; di <= 1; ++di) {
      LatticeCoord c{i0 + di, j0 + dj};
      if (!w.contains(c)) continue;
      double dd = dist(embed(c, w.delta), x);
      if (dd < best_d) {
        best_d = dd;
        best = c;
      }
    }
  if (!w.contains(best)) throw std::invalid_argument("site_containing: x outside window");
  return best;
}

LatticeCoord window_center_site(const Window& w) {
  return {w.origin.i + w.li / 2, w.origin.j + w.lj / 2};
}

std::optional<double> black_circuit_surrounding(const PercConfig& cfg,
                                                EmbeddedPoint x) {
  const Window& w = cfg.window;
  check_margin(w, x);
  LatticeCoord sx = site_containing(w, x);
  const int64_t li = w.li, lj = w.lj;
  const int64_t start = w.index(sx);
  auto on_ring = [&](int64_t s) {
    int64_t i = s % li, j = s / li;
    return i == 0 || i == li - 1 || j == 0 || j == lj - 1;
  };

  // Region grows outward in onion layers: each black shell blocking the
  // region is a circuit surrounding x; the last complete shell is the
  // outermost one.
  std::vector<uint8_t> in_region(size_t(w.site_count()), 0);
  std::vector<uint32_t> frontier;
  {
    std::queue<int64_t> q;
    q.push(start);
    in_region[size_t(start)] = 1;
    while (!q.empty()) {
      int64_t s = q.front();
      q.pop();
      frontier.push_back(uint32_t(s));
      if (on_ring(s)) return std::nullopt;  // escapes the window
      int64_t i = s % li, j = s / li;
      for (auto [di, dj] : kAllNbrs) {
        int64_t ni = i + di, nj = j + dj;
        if (ni < 0 || ni >= li || nj < 0 || nj >= lj) continue;
        int64_t t = nj * li + ni;
        if (!in_region[size_t(t)] && cfg.white_at(t)) {
          in_region[size_t(t)] = 1;
          q.push(t);
        }
      }
    }
  }

  std::optional<double> best;
  std::vector<uint32_t> shell;
  std::vector<uint8_t> in_shell(size_t(w.site_count()), 0);
  while (true) {
    shell.clear();
    bool shell_on_ring = false;
    for (uint32_t s : frontier) {
      int64_t i = s % li, j = s / li;
      for (auto [di, dj] : kAllNbrs) {
        int64_t ni = i + di, nj = j + dj;
        if (ni < 0 || ni >= li || nj < 0 || nj >= lj) continue;
        int64_t t = nj * li + ni;
        if (in_region[size_t(t)] || in_shell[size_t(t)]) continue;
        // region boundary is all black by construction
        in_shell[size_t(t)] = 1;
        shell.push_back(uint32_t(t));
        if (on_ring(t)) shell_on_ring = true;
      }
    }
    if (shell.empty()) break;
    // The necklace of neighbors of a strictly interior region closes into a
    // surrounding circuit even when it uses window-ring sites; peeling must
    // stop after such a shell (the region then touches the ring).
    std::vector<EmbeddedPoint> pts;
    pts.reserve(shell.size());
    for (uint32_t s : shell) pts.push_back(embed(w.coord(s), w.delta));
    best = diam(pts);
    if (shell_on_ring) break;

    // absorb the shell, then flood adjacent whites
    std::vector<uint32_t> next;
    std::queue<int64_t> q;
    for (uint32_t s : shell) {
      in_region[size_t(s)] = 1;
      in_shell[size_t(s)] = 0;
      next.push_back(s);
      q.push(int64_t(s));
    }
    bool escaped = false;
    while (!q.empty()) {
      int64_t s = q.front();
      q.pop();
      int64_t i = s % li, j = s / li;
      for (auto [di, dj] : kAllNbrs) {
        int64_t ni = i + di, nj = j + dj;
        if (ni < 0 || ni >= li || nj < 0 || nj >= lj) continue;
        int64_t t = nj * li + ni;
        if (!in_region[size_t(t)] && cfg.white_at(t)) {
          in_region[size_t(t)] = 1;
          next.push_back(uint32_t(t));
          q.push(t);
          if (on_ring(t)) escaped = true;
        }
      }
    }
    if (escaped) break;
    frontier = std::move(next);
  }
  return best;
}

std::optional<double> black_cluster_diam_at(const PercConfig& cfg,
                                            EmbeddedPoint x) {
  const Window& w = cfg.window;
  check_margin(w, x);
  LatticeCoord sx = site_containing(w, x);
  int64_t start = w.index(sx);
  if (cfg.white_at(start)) return std::nullopt;
  const int64_t li = w.li, lj = w.lj;
  std::vector<uint8_t> seen(size_t(w.site_count()), 0);
  std::vector<EmbeddedPoint> pts;
  std::queue<int64_t> q;
  q.push(start);
  seen[size_t(start)] = 1;
  while (!q.empty()) {
    int64_t s = q.front();
    q.pop();
    pts.push_back(embed(w.coord(s), w.delta));
    int64_t i = s % li, j = s / li;
    for (auto [di, dj] : kAllNbrs) {
      int64_t ni = i + di, nj = j + dj;
      if (ni < 0 || ni >= li || nj < 0 || nj >= lj) continue;
      int64_t t = nj * li + ni;
      if (!seen[size_t(t)] && !cfg.white_at(t)) {
        seen[size_t(t)] = 1;
        q.push(t);
      }
    }
  }
  return diam(pts);
}

EventStats estimate_event(const std::string& name, const Window& window,
                          double p, uint64_t replicas, uint64_t seed,
                          int workers, const EventFn& event) {
  if (replicas < 1) throw std::invalid_argument("estimate_event: replicas < 1");
  ReplicaTotals totals = run_replicas(replicas, workers, [&](uint64_t r) {
    PercConfig cfg = sample(window, p, seed, uint32_t(r));
    EventOutcome o = event(cfg);
    return ReplicaOutcome{o.hit, o.truncated};
  });
  return EventStats::from_counts(name, totals.hits, totals.replicas,
                                 totals.truncated);
}

std::string EventDescriptor::name() const {
  std::string suffix = color == Color::White ? "w" : "b";
  if (kind == "H") return "H^" + suffix + "(" + std::to_string(n) + ")";
  if (kind == "Cw" || kind == "Cb") return "C^" + std::string(1, kind[1]);
  if (kind == "D") return "D_r";
  if (kind == "Dp") return "D'_r";
  if (kind == "K") return "K" + std::to_string(k) + "^" + suffix;
  if (kind == "F") return "F";
  if (kind == "G") return "G_L";
  return kind;
}

EventFn make_event(const EventDescriptor& d, const Window& window) {
  EmbeddedPoint center = embed(window_center_site(window), window.delta);
  if (d.kind == "H") {
    int64_t n = d.n;
    Color c = d.color;
    return [n, c](const PercConfig& cfg) {
      return EventOutcome{horizontal_crossing(cfg, n, c), false};
    };
  }
  if (d.kind == "Cw" || d.kind == "Cb") {
    Annulus a{center, d.r, d.R};
    Color c = d.kind == "Cw" ? Color::White : Color::Black;
    return [a, c](const PercConfig& cfg) {
      return EventOutcome{annulus_crossing(cfg, a, c), false};
    };
  }
  if (d.kind == "K") {
    Annulus a{center, d.r, d.R};
    Color c = d.color;
    int64_t k = d.k;
    return [a, c, k](const PercConfig& cfg) {
      return EventOutcome{max_disjoint_crossings(cfg, a, c, k) >= k, false};
    };
  }
  if (d.kind == "D") {
    double r = d.r;
    return [r, center](const PercConfig& cfg) {
      auto dd = black_circuit_surrounding(cfg, center);
      return EventOutcome{dd.has_value() && *dd >= r - 1e-12, false};
    };
  }
  if (d.kind == "Dp") {
    double r = d.r;
    return [r, center](const PercConfig& cfg) {
      auto dd = black_cluster_diam_at(cfg, center);
      return EventOutcome{dd.has_value() && *dd >= r - 1e-12, false};
    };
  }
  if (d.kind == "F") {
    Annulus a{center, d.r, d.R};
    return [a, center](const PercConfig& cfg) {
      LoopSet ls = trace_loops(cfg);
      return EventOutcome{count_in_annulus(ls, a, center) >= 1, false};
    };
  }
  if (d.kind == "G") {
    double L = d.L;
    return [L, center](const PercConfig& cfg) {
      LoopSet ls = trace_loops(cfg);
      LargestLoopResult r = largest_loop_around(ls, center);
      bool hit = r.loop != nullptr && r.loop->diameter <= L + 1e-12;
      return EventOutcome{hit, r.truncated};
    };
  }
  throw std::invalid_argument("make_event: unknown event kind '" + d.kind + "'");
}

}  // namespace perclab
