#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace perclab {

// Integer coordinates on the triangular lattice. Axis 1 is the Euclidean
// x-axis, axis 2 points along (1/2, sqrt(3)/2).
struct LatticeCoord {
  int64_t i = 0;
  int64_t j = 0;

  friend bool operator==(const LatticeCoord&, const LatticeCoord&) = default;
};

struct EmbeddedPoint {
  double x = 0.0;
  double y = 0.0;
};

// Parallelogram with sides parallel to the two lattice axes, Euclidean side
// length `side`, centered at `center`. Membership is closed.
struct Box {
  EmbeddedPoint center;
  double side = 0.0;
};

// B(center;R) minus the open interior of B(center;r), 0 < r < R.
struct Annulus {
  EmbeddedPoint center;
  double r = 0.0;
  double R = 0.0;
};

// Finite simulation region: L_i x L_j sites at spacing delta, offset by
// `origin` in lattice coordinates.
struct Window {
  LatticeCoord origin;
  int64_t li = 0;
  int64_t lj = 0;
  double delta = 1.0;

  int64_t site_count() const { return li * lj; }
  bool contains(LatticeCoord c) const {
    return c.i >= origin.i && c.i < origin.i + li && c.j >= origin.j &&
           c.j < origin.j + lj;
  }
  // Dense index of a window site, row-major in (j, i).
  int64_t index(LatticeCoord c) const {
    return (c.j - origin.j) * li + (c.i - origin.i);
  }
  LatticeCoord coord(int64_t idx) const {
    return {origin.i + idx % li, origin.j + idx / li};
  }
};

inline constexpr double kSqrt3 = 1.7320508075688772;

inline EmbeddedPoint embed(LatticeCoord c, double delta) {
  return {delta * (double(c.i) + 0.5 * double(c.j)),
          delta * double(c.j) * (kSqrt3 / 2.0)};
}

inline std::array<LatticeCoord, 6> neighbors(LatticeCoord c) {
  return {{{c.i + 1, c.j},
           {c.i - 1, c.j},
           {c.i, c.j + 1},
           {c.i, c.j - 1},
           {c.i + 1, c.j - 1},
           {c.i - 1, c.j + 1}}};
}

// Coordinates of a point in the (axis 1, axis 2) frame; a site (i,j) at
// spacing delta maps to (delta*i, delta*j).
inline EmbeddedPoint axis_coords(EmbeddedPoint p) {
  return {p.x - p.y / kSqrt3, 2.0 * p.y / kSqrt3};
}

// Closed membership with a small relative tolerance so that site centers
// landing exactly on the parallelogram boundary count as inside.
inline bool box_contains(const Box& b, EmbeddedPoint p) {
  EmbeddedPoint a = axis_coords(p);
  EmbeddedPoint c = axis_coords(b.center);
  double h = b.side / 2.0;
  double tol = 1e-9 * (std::abs(b.side) + 1.0);
  return std::abs(a.x - c.x) <= h + tol && std::abs(a.y - c.y) <= h + tol;
}

inline bool box_contains_open(const Box& b, EmbeddedPoint p) {
  EmbeddedPoint a = axis_coords(p);
  EmbeddedPoint c = axis_coords(b.center);
  double h = b.side / 2.0;
  double tol = 1e-9 * (std::abs(b.side) + 1.0);
  return std::abs(a.x - c.x) < h - tol && std::abs(a.y - c.y) < h - tol;
}

inline bool annulus_contains(const Annulus& a, EmbeddedPoint p) {
  return box_contains({a.center, a.R}, p) &&
         !box_contains_open({a.center, a.r}, p);
}

std::vector<LatticeCoord> sites_in_box(const Box& b, double delta);

// Max pairwise Euclidean distance. Throws on an empty set.
double diam(std::span<const EmbeddedPoint> points);

inline double dist(EmbeddedPoint a, EmbeddedPoint b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace perclab
