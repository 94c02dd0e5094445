#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perclab/lattice.hpp"
#include "perclab/sampler.hpp"
#include "perclab/stats.hpp"

namespace perclab {

inline constexpr uint32_t kNoCluster = 0xffffffffu;

// Connected components of the monochromatic subgraph, with per-cluster site
// lists and lattice bounding boxes.
struct ClusterLabeling {
  Color color = Color::White;
  uint32_t n_clusters = 0;
  std::vector<uint32_t> label;    // per window site; kNoCluster for the other color
  std::vector<uint32_t> sites;    // site indices grouped by cluster (CSR)
  std::vector<uint32_t> offsets;  // size n_clusters + 1
  // min_i, max_i, min_j, max_j in window-relative coordinates
  std::vector<std::array<int32_t, 4>> bbox;

  double cluster_diameter(uint32_t cluster, const Window& w) const;
};

ClusterLabeling label_clusters(const PercConfig& cfg, Color color);

// White (or black) left-right crossing of the canonical n-box: the L x L
// rhombus of window sites at relative coordinates [0,L)^2, L = round(n).
// Crossing joins the leftmost site column to the rightmost.
bool horizontal_crossing(const PercConfig& cfg, int64_t n, Color color);

// Monochromatic crossing of a parallelogram block of L_1 x L_2 sites at
// relative offset (i0,j0), from the first to the last site column.
bool block_crossing(const PercConfig& cfg, int64_t i0, int64_t j0, int64_t l1,
                    int64_t l2, Color color);

// Monochromatic path from a site adjacent to the inner boundary of the
// annulus to a site adjacent to its outer boundary, staying inside the
// closed annulus.
bool annulus_crossing(const PercConfig& cfg, const Annulus& a, Color color);

// Maximum number of vertex-disjoint inner-to-outer monochromatic crossings
// (Menger), via unit-vertex-capacity max flow with BFS augmentation.
// If cap >= 0 the search stops once `cap` disjoint paths are found.
int64_t max_disjoint_crossings(const PercConfig& cfg, const Annulus& a,
                               Color color, int64_t cap = -1);

// Witness for a max_disjoint_crossings result: the vertex-disjoint paths as
// site-index sequences, plus a blocking vertex cut of the same size.
struct DisjointCrossingCertificate {
  int64_t k = 0;
  std::vector<std::vector<uint32_t>> paths;
  std::vector<uint32_t> cut;
};
DisjointCrossingCertificate disjoint_crossing_certificate(const PercConfig& cfg,
                                                          const Annulus& a,
                                                          Color color);

// Diameter of the maximal black circuit surrounding x (outermost enclosing
// shell), or nullopt when no black circuit surrounds x inside the window.
// Enforces the margin rule on x.
std::optional<double> black_circuit_surrounding(const PercConfig& cfg,
                                                EmbeddedPoint x);

// Diameter of the black cluster of the site containing x, or nullopt when
// that site is White. Superset proxy for the black-path event D'_r.
std::optional<double> black_cluster_diam_at(const PercConfig& cfg,
                                            EmbeddedPoint x);

// Window site whose hexagon contains x (nearest site center).
LatticeCoord site_containing(const Window& w, EmbeddedPoint x);

// Center site of a window; event estimators measure around its center.
LatticeCoord window_center_site(const Window& w);

struct EventOutcome {
  bool hit = false;
  bool truncated = false;
};
using EventFn = std::function<EventOutcome(const PercConfig&)>;

// Samples `replicas` independent configurations and evaluates the event on
// each. Replica evaluation errors abort the run.
EventStats estimate_event(const std::string& name, const Window& window,
                          double p, uint64_t replicas, uint64_t seed,
                          int workers, const EventFn& event);

// Named-event descriptor for the CLI and Monte Carlo wrappers.
// kind: H | Cw | Cb | D | Dp | K | F | G
struct EventDescriptor {
  std::string kind;
  int64_t n = 0;      // H: box side in lattice units
  double r = 0.0;     // annulus inner / D, Dp threshold radius
  double R = 0.0;     // annulus outer
  int64_t k = 1;      // K: required number of disjoint crossings
  double L = 0.0;     // G: largest-loop diameter bound
  Color color = Color::White;

  std::string name() const;
};
EventFn make_event(const EventDescriptor& d, const Window& window);

}  // namespace perclab
