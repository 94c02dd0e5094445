#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "perclab/lattice.hpp"
#include "perclab/sampler.hpp"

namespace perclab {

// A black/white interface traced on hexagonal edges. Vertices are the
// hexagon-edge endpoints (centroids of the triangular-lattice faces).
// Closed loops repeat the first vertex at the end. The walk direction keeps
// White on the left.
struct BoundaryLoop {
  std::vector<EmbeddedPoint> vertices;
  bool closed = false;
  double diameter = 0.0;
  bool touches_window_boundary = false;
  // Window site indices adjacent to the walk, one pair per edge.
  std::vector<uint32_t> white_sites;
  std::vector<uint32_t> black_sites;
  // Bounding box of the vertices, for fast rejection.
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;

  size_t n_edges() const {
    return vertices.size() > 1 ? vertices.size() - 1 : 0;
  }
};

struct LoopSet {
  std::vector<BoundaryLoop> loops;
  std::vector<BoundaryLoop> open_fragments;
  double p = 0.0;
  double delta = 1.0;
  uint64_t seed = 0;
  uint32_t replica = 0;
};

// Traces every hexagon edge whose two incident hexagons are inside the
// window and differently colored, each exactly once. Interfaces that hit
// the window boundary become open fragments ("plane mode"). If closed_mode
// is set, the window is wrapped in an all-Black ring first, closing every
// interface (debugging aid for the partition invariant).
LoopSet trace_loops(const PercConfig& cfg, bool closed_mode = false);

// Even-odd interior test. Throws if x lies on the polyline.
bool surrounds(const BoundaryLoop& loop, EmbeddedPoint x);

// Throws if x violates the margin rule (distance to the window boundary
// must be at least a quarter of the window's short side).
void check_margin(const Window& w, EmbeddedPoint x);

// Closed loops surrounding x, sorted by diameter ascending (inner to outer).
std::vector<const BoundaryLoop*> loops_around(const LoopSet& ls,
                                              EmbeddedPoint x);

struct LargestLoopResult {
  const BoundaryLoop* loop = nullptr;  // null when no loop surrounds x
  bool truncated = false;
};
LargestLoopResult largest_loop_around(const LoopSet& ls, EmbeddedPoint x);

// Closed loops surrounding x and contained entirely in the closed annulus.
int64_t count_in_annulus(const LoopSet& ls, const Annulus& a, EmbeddedPoint x);

// Maximal interface sub-arcs joining the inner to the outer boundary of the
// annulus, over loops and fragments. Even whenever no fragment meets the
// annulus.
int64_t interface_crossing_count(const LoopSet& ls, const Annulus& a);

// Number of bichromatic hexagon edges with both incident hexagons in the
// window; the edge-partition invariant compares this against the total
// length of loops and fragments.
uint64_t bichromatic_interior_edges(const PercConfig& cfg);

}  // namespace perclab
