#include "perclab/interface_loops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace perclab {

namespace {

// A hexagonal-lattice vertex is a face (triangle) of the triangular lattice:
// the "up" triangle of cell (ci,cj) has corners (ci,cj),(ci+1,cj),(ci,cj+1),
// the "down" triangle has corners (ci+1,cj),(ci,cj+1),(ci+1,cj+1).
struct Tri {
  int64_t ci = 0, cj = 0;
  int t = 0;  // 0 = up, 1 = down

  friend bool operator==(const Tri&, const Tri&) = default;
};

// Hexagon edges are dual to triangular-lattice edges. Edge types relative to
// a window site s = (i,j):
//   type 0: (i,j)-(i+1,j)     flanked by up(i,j) and down(i,j-1)
//   type 1: (i,j)-(i,j+1)     flanked by up(i,j) and down(i-1,j)
//   type 2: (i+1,j)-(i,j+1)   flanked by up(i,j) and down(i,j)
struct Walker {
  const PercConfig& cfg;
  int64_t li, lj;
  std::vector<bool> visited;

  explicit Walker(const PercConfig& c)
      : cfg(c), li(c.window.li), lj(c.window.lj),
        visited(size_t(3 * c.window.site_count()), false) {}

  bool edge_exists(int64_t i, int64_t j, int type) const {
    switch (type) {
      case 0: return i + 1 < li;
      case 1: return j + 1 < lj;
      default: return i + 1 < li && j + 1 < lj;
    }
  }
  std::pair<int64_t, int64_t> edge_sites(int64_t eid) const {
    int64_t s = eid / 3;
    int type = int(eid % 3);
    switch (type) {
      case 0: return {s, s + 1};
      case 1: return {s, s + li};
      default: return {s + 1, s + li};
    }
  }
  bool is_interface(int64_t eid) const {
    auto [a, b] = edge_sites(eid);
    return cfg.white_at(a) != cfg.white_at(b);
  }
  std::pair<Tri, Tri> flanks(int64_t eid) const {
    int64_t s = eid / 3;
    int type = int(eid % 3);
    int64_t i = s % li, j = s / li;
    switch (type) {
      case 0: return {{i, j, 0}, {i, j - 1, 1}};
      case 1: return {{i, j, 0}, {i - 1, j, 1}};
      default: return {{i, j, 0}, {i, j, 1}};
    }
  }
  bool valid(const Tri& T) const {
    return T.ci >= 0 && T.ci < li - 1 && T.cj >= 0 && T.cj < lj - 1;
  }
  std::array<int64_t, 3> tri_edges(const Tri& T) const {
    int64_t s = T.cj * li + T.ci;
    if (T.t == 0) return {3 * s + 0, 3 * s + 1, 3 * s + 2};
    return {3 * s + 2, 3 * (s + 1) + 1, 3 * (s + li) + 0};
  }
  int64_t other_interface(const Tri& T, int64_t eid) const {
    for (int64_t e : tri_edges(T))
      if (e != eid && is_interface(e)) return e;
    throw std::logic_error("interface walk: no continuation edge");
  }
  Tri other_flank(int64_t eid, const Tri& T) const {
    auto [a, b] = flanks(eid);
    return a == T ? b : a;
  }
  EmbeddedPoint centroid(const Tri& T) const {
    LatticeCoord o = cfg.window.origin;
    double d = cfg.window.delta;
    EmbeddedPoint p0 = embed({o.i + T.ci, o.j + T.cj}, d);
    // up: corners (0,0),(1,0),(0,1); down: (1,0),(0,1),(1,1)
    double si = T.t == 0 ? 1.0 : 2.0;
    double sj = si;
    return {p0.x + d * (si + 0.5 * sj) / 3.0, p0.y + d * sj * (kSqrt3 / 2.0) / 3.0};
  }
  bool on_outer_ring(int64_t s) const {
    int64_t i = s % li, j = s / li;
    return i == 0 || i == li - 1 || j == 0 || j == lj - 1;
  }

  void record_sides(int64_t eid, BoundaryLoop& out) const {
    auto [a, b] = edge_sites(eid);
    if (cfg.white_at(a)) {
      out.white_sites.push_back(uint32_t(a));
      out.black_sites.push_back(uint32_t(b));
    } else {
      out.white_sites.push_back(uint32_t(b));
      out.black_sites.push_back(uint32_t(a));
    }
    if (on_outer_ring(a) || on_outer_ring(b)) out.touches_window_boundary = true;
  }

  // Reorients the walk so that the white hexagon lies on the left of the
  // first traversed edge (and hence of every edge).
  void orient_white_left(BoundaryLoop& out, int64_t first_eid) const {
    auto [a, b] = edge_sites(first_eid);
    int64_t w = cfg.white_at(a) ? a : b;
    EmbeddedPoint wp = embed(cfg.window.coord(w), cfg.window.delta);
    EmbeddedPoint v0 = out.vertices[0], v1 = out.vertices[1];
    double cross = (v1.x - v0.x) * (wp.y - v0.y) - (v1.y - v0.y) * (wp.x - v0.x);
    if (cross < 0) {
      std::reverse(out.vertices.begin(), out.vertices.end());
      std::reverse(out.white_sites.begin(), out.white_sites.end());
      std::reverse(out.black_sites.begin(), out.black_sites.end());
    }
  }

  void finish(BoundaryLoop& out) const {
    size_t n = out.closed ? out.vertices.size() - 1 : out.vertices.size();
    std::vector<EmbeddedPoint> pts(out.vertices.begin(),
                                   out.vertices.begin() + std::ptrdiff_t(n));
    out.diameter = diam(pts);
    out.min_x = out.max_x = pts[0].x;
    out.min_y = out.max_y = pts[0].y;
    for (const auto& v : out.vertices) {
      out.min_x = std::min(out.min_x, v.x);
      out.max_x = std::max(out.max_x, v.x);
      out.min_y = std::min(out.min_y, v.y);
      out.max_y = std::max(out.max_y, v.y);
    }
  }

  BoundaryLoop walk_fragment(int64_t eid) {
    auto [f0, f1] = flanks(eid);
    Tri start = valid(f0) ? f1 : f0;  // invalid terminal
    Tri cur = valid(f0) ? f0 : f1;
    BoundaryLoop out;
    out.closed = false;
    out.touches_window_boundary = true;
    visited[size_t(eid)] = true;
    record_sides(eid, out);
    out.vertices.push_back(centroid(start));
    int64_t cur_edge = eid;
    while (valid(cur)) {
      out.vertices.push_back(centroid(cur));
      int64_t e2 = other_interface(cur, cur_edge);
      visited[size_t(e2)] = true;
      record_sides(e2, out);
      cur_edge = e2;
      cur = other_flank(e2, cur);
    }
    out.vertices.push_back(centroid(cur));
    orient_white_left(out, eid);
    finish(out);
    return out;
  }

  BoundaryLoop walk_loop(int64_t eid) {
    auto [T0, T1] = flanks(eid);
    BoundaryLoop out;
    out.closed = true;
    visited[size_t(eid)] = true;
    record_sides(eid, out);
    out.vertices.push_back(centroid(T0));
    out.vertices.push_back(centroid(T1));
    int64_t cur_edge = eid;
    Tri cur = T1;
    while (true) {
      int64_t e2 = other_interface(cur, cur_edge);
      if (e2 == eid) break;
      visited[size_t(e2)] = true;
      record_sides(e2, out);
      cur = other_flank(e2, cur);
      out.vertices.push_back(centroid(cur));
      cur_edge = e2;
    }
    orient_white_left(out, eid);
    finish(out);
    return out;
  }
};

}  // namespace

LoopSet trace_loops(const PercConfig& cfg, bool closed_mode) {
  if (closed_mode) {
    // Wrap the window in an all-Black ring; every interface then closes.
    PercConfig wrapped;
    wrapped.window = {{cfg.window.origin.i - 1, cfg.window.origin.j - 1},
                      cfg.window.li + 2, cfg.window.lj + 2, cfg.window.delta};
    wrapped.p = cfg.p;
    wrapped.seed = cfg.seed;
    wrapped.replica = cfg.replica;
    int64_t n = wrapped.window.site_count();
    wrapped.bits.assign(size_t((n + 63) / 64), 0);
    for (int64_t j = 0; j < cfg.window.lj; ++j)
      for (int64_t i = 0; i < cfg.window.li; ++i)
        if (cfg.white_at(j * cfg.window.li + i)) {
          int64_t idx = (j + 1) * wrapped.window.li + (i + 1);
          wrapped.bits[size_t(idx >> 6)] |= (1ull << (idx & 63));
        }
    LoopSet ls = trace_loops(wrapped, false);
    ls.p = cfg.p;
    return ls;
  }

  LoopSet ls;
  ls.p = cfg.p;
  ls.delta = cfg.window.delta;
  ls.seed = cfg.seed;
  ls.replica = cfg.replica;

  Walker wk(cfg);
  int64_t n_edges = 3 * cfg.window.site_count();
  // First pass: fragments, started from edges with an out-of-window flank.
  for (int64_t eid = 0; eid < n_edges; ++eid) {
    int64_t s = eid / 3;
    if (!wk.edge_exists(s % wk.li, s / wk.li, int(eid % 3))) continue;
    if (wk.visited[size_t(eid)] || !wk.is_interface(eid)) continue;
    auto [f0, f1] = wk.flanks(eid);
    if (wk.valid(f0) && wk.valid(f1)) continue;
    ls.open_fragments.push_back(wk.walk_fragment(eid));
  }
  // Second pass: the remaining interface edges form closed loops.
  for (int64_t eid = 0; eid < n_edges; ++eid) {
    int64_t s = eid / 3;
    if (!wk.edge_exists(s % wk.li, s / wk.li, int(eid % 3))) continue;
    if (wk.visited[size_t(eid)] || !wk.is_interface(eid)) continue;
    ls.loops.push_back(wk.walk_loop(eid));
  }
  return ls;
}

bool surrounds(const BoundaryLoop& loop, EmbeddedPoint x) {
  if (x.x < loop.min_x || x.x > loop.max_x || x.y < loop.min_y ||
      x.y > loop.max_y)
    return false;
  double scale = std::max({std::abs(loop.max_x - loop.min_x),
                           std::abs(loop.max_y - loop.min_y), 1e-300});
  double tol = 1e-12 * scale;
  bool inside = false;
  size_t n = loop.vertices.size();
  for (size_t k = 0; k + 1 < n; ++k) {
    EmbeddedPoint a = loop.vertices[k], b = loop.vertices[k + 1];
    // on-segment check
    double cr = (b.x - a.x) * (x.y - a.y) - (b.y - a.y) * (x.x - a.x);
    double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len > 0 && std::abs(cr) / len <= tol) {
      double dot = (x.x - a.x) * (b.x - a.x) + (x.y - a.y) * (b.y - a.y);
      if (dot >= -tol * len && dot <= len * len + tol * len)
        throw std::domain_error("surrounds: point lies on the loop");
    }
    if ((a.y > x.y) != (b.y > x.y)) {
      double t = (x.y - a.y) / (b.y - a.y);
      if (a.x + t * (b.x - a.x) > x.x) inside = !inside;
    }
  }
  return inside;
}

void check_margin(const Window& w, EmbeddedPoint x) {
  EmbeddedPoint a = axis_coords(x);
  double d = w.delta;
  double alo = d * double(w.origin.i), ahi = d * double(w.origin.i + w.li - 1);
  double blo = d * double(w.origin.j), bhi = d * double(w.origin.j + w.lj - 1);
  double side = std::min(ahi - alo, bhi - blo);
  double margin =
      std::min(std::min(a.x - alo, ahi - a.x), std::min(a.y - blo, bhi - a.y));
  if (margin < side / 4.0 - 1e-9 * (side + 1.0))
    throw std::invalid_argument("margin rule violated: point too close to window boundary");
}

std::vector<const BoundaryLoop*> loops_around(const LoopSet& ls,
                                              EmbeddedPoint x) {
  std::vector<const BoundaryLoop*> out;
  for (const auto& loop : ls.loops)
    if (surrounds(loop, x)) out.push_back(&loop);
  std::sort(out.begin(), out.end(), [](const BoundaryLoop* a, const BoundaryLoop* b) {
    return a->diameter < b->diameter;
  });
  return out;
}

namespace {

// Would this fragment, once closed through the window boundary, plausibly
// surround x? Tested by closing it with a straight chord.
bool fragment_may_surround(const BoundaryLoop& frag, EmbeddedPoint x) {
  if (frag.vertices.size() < 3) return false;
  BoundaryLoop closed = frag;
  closed.vertices.push_back(closed.vertices.front());
  try {
    return surrounds(closed, x);
  } catch (const std::domain_error&) {
    return true;  // point on the closing chord: treat as uncertain
  }
}

}  // namespace

LargestLoopResult largest_loop_around(const LoopSet& ls, EmbeddedPoint x) {
  LargestLoopResult res;
  for (const auto& loop : ls.loops) {
    if (!surrounds(loop, x)) continue;
    if (!res.loop || loop.diameter > res.loop->diameter) res.loop = &loop;
  }
  for (const auto& frag : ls.open_fragments) {
    if (fragment_may_surround(frag, x)) {
      res.truncated = true;
      break;
    }
  }
  return res;
}

int64_t count_in_annulus(const LoopSet& ls, const Annulus& a, EmbeddedPoint x) {
  int64_t count = 0;
  for (const auto& loop : ls.loops) {
    bool in_annulus = true;
    for (size_t k = 0; k + 1 < loop.vertices.size() && in_annulus; ++k)
      in_annulus = annulus_contains(a, loop.vertices[k]);
    if (in_annulus && surrounds(loop, x)) ++count;
  }
  return count;
}

namespace {

int region_of(const Annulus& a, EmbeddedPoint p) {
  if (!box_contains({a.center, a.R}, p)) return 2;
  if (box_contains_open({a.center, a.r}, p)) return 0;
  return 1;
}

int64_t crossings_of_polyline(const BoundaryLoop& c, const Annulus& a) {
  size_t n = c.vertices.size();
  if (n < 2) return 0;
  if (!c.closed) {
    int64_t count = 0;
    int last = -1;
    for (size_t k = 0; k < n; ++k) {
      int r = region_of(a, c.vertices[k]);
      if (r == 1) continue;
      if (last != -1 && r != last) ++count;
      last = r;
    }
    return count;
  }
  // closed: drop duplicate last vertex and scan cyclically from the first
  // terminal vertex
  size_t m = n - 1;
  size_t first = m;
  int first_region = -1;
  for (size_t k = 0; k < m; ++k) {
    int r = region_of(a, c.vertices[k]);
    if (r != 1) {
      first = k;
      first_region = r;
      break;
    }
  }
  if (first == m) return 0;
  int64_t count = 0;
  int last = first_region;
  for (size_t s = 1; s <= m; ++s) {
    int r = region_of(a, c.vertices[(first + s) % m]);
    if (r == 1) continue;
    if (r != last) ++count;
    last = r;
  }
  return count;
}

}  // namespace

int64_t interface_crossing_count(const LoopSet& ls, const Annulus& a) {
  int64_t count = 0;
  for (const auto& loop : ls.loops) count += crossings_of_polyline(loop, a);
  for (const auto& frag : ls.open_fragments)
    count += crossings_of_polyline(frag, a);
  return count;
}

uint64_t bichromatic_interior_edges(const PercConfig& cfg) {
  uint64_t count = 0;
  int64_t li = cfg.window.li, lj = cfg.window.lj;
  for (int64_t j = 0; j < lj; ++j)
    for (int64_t i = 0; i < li; ++i) {
      int64_t s = j * li + i;
      bool w = cfg.white_at(s);
      if (i + 1 < li && w != cfg.white_at(s + 1)) ++count;
      if (j + 1 < lj && w != cfg.white_at(s + li)) ++count;
      if (i + 1 < li && j + 1 < lj && cfg.white_at(s + 1) != cfg.white_at(s + li))
        ++count;
    }
  return count;
}

}  // namespace perclab
