#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "perclab/lattice.hpp"

namespace perclab {

// Point of the one-point compactification of the plane.
struct CPoint {
  double x = 0.0;
  double y = 0.0;
  bool at_infinity = false;

  static CPoint infinity() { return CPoint{0.0, 0.0, true}; }
  friend bool operator==(const CPoint&, const CPoint&) = default;
};

// Inverse stereographic projection onto the unit sphere; infinity maps to
// the north pole.
std::array<double, 3> stereographic(CPoint u);

// Metric of the compactified plane: half the great-circle distance between
// the spherical images (the conformal factor (1+|x|^2)^-1 is half the
// spherical one). Range [0, pi/2].
double delta_dist(CPoint u, CPoint v);

// Polyline curve. A closed curve stores first == last.
struct Curve {
  std::vector<CPoint> vertices;
  bool closed = false;
};

struct CurveSet {
  std::vector<Curve> curves;
};

// Inserts vertices on finite segments so no edge exceeds metric length h.
Curve refine_curve(const Curve& c, double h);

// Discrete Frechet distance under delta_dist, after refining both inputs
// to resolution h. Closed curves are additionally minimized over cyclic
// shifts of the second curve's start vertex (coarse grid, then local
// refinement). Result is within O(h) of the continuous infimum.
double curve_dist(const Curve& g1, const Curve& g2, double h = 0.05);

// Symmetric Hausdorff distance induced by curve_dist. Throws on empty sets.
double set_dist(const CurveSet& f, const CurveSet& g, double h = 0.05);

}  // namespace perclab
