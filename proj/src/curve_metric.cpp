#include "perclab/curve_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace perclab {

std::array<double, 3> stereographic(CPoint u) {
  if (u.at_infinity) return {0.0, 0.0, 1.0};
  double n2 = u.x * u.x + u.y * u.y;
  double d = 1.0 + n2;
  return {2.0 * u.x / d, 2.0 * u.y / d, (n2 - 1.0) / d};
}

double delta_dist(CPoint u, CPoint v) {
  auto a = stereographic(u), b = stereographic(v);
  // half the great-circle angle, in the atan2 form that is exact at 0
  // and well conditioned at both ends (acos of the dot product is not)
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  double sx = a[0] + b[0], sy = a[1] + b[1], sz = a[2] + b[2];
  return std::atan2(std::sqrt(dx * dx + dy * dy + dz * dz),
                    std::sqrt(sx * sx + sy * sy + sz * sz));
}

Curve refine_curve(const Curve& c, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("refine_curve: h <= 0");
  if (c.vertices.size() < 2) return c;
  Curve out;
  out.closed = c.closed;
  out.vertices.push_back(c.vertices.front());
  for (size_t k = 1; k < c.vertices.size(); ++k) {
    CPoint a = c.vertices[k - 1], b = c.vertices[k];
    if (!a.at_infinity && !b.at_infinity) {
      double len = delta_dist(a, b);
      int pieces = int(std::ceil(len / h));
      for (int q = 1; q < pieces; ++q) {
        double t = double(q) / double(pieces);
        out.vertices.push_back(
            CPoint{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), false});
      }
    }
    out.vertices.push_back(b);
  }
  return out;
}

namespace {

// Discrete Frechet distance between vertex sequences (two-row DP).
double frechet(const std::vector<CPoint>& a, const std::vector<CPoint>& b) {
  size_t n = a.size(), m = b.size();
  std::vector<double> prev(m), cur(m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      double d = delta_dist(a[i], b[j]);
      double reach;
      if (i == 0 && j == 0)
        reach = 0.0;
      else if (i == 0)
        reach = cur[j - 1];
      else if (j == 0)
        reach = prev[0];
      else
        reach = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = std::max(d, reach);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

// Rotates a closed polyline (first == last) to start at vertex s.
std::vector<CPoint> rotate_closed(const std::vector<CPoint>& v, size_t s) {
  size_t m = v.size() - 1;  // distinct vertices
  std::vector<CPoint> out;
  out.reserve(v.size());
  for (size_t k = 0; k <= m; ++k) out.push_back(v[(s + k) % m]);
  return out;
}

// Deterministic total order so that curve_dist(a, b) == curve_dist(b, a)
// exactly: the shift search always runs over the same operand.
bool curve_before(const Curve& a, const Curve& b) {
  if (a.vertices.size() != b.vertices.size())
    return a.vertices.size() < b.vertices.size();
  for (size_t k = 0; k < a.vertices.size(); ++k) {
    const CPoint &u = a.vertices[k], &v = b.vertices[k];
    if (u.at_infinity != v.at_infinity) return v.at_infinity;
    if (u.x != v.x) return u.x < v.x;
    if (u.y != v.y) return u.y < v.y;
  }
  return false;
}

}  // namespace

double curve_dist(const Curve& g1, const Curve& g2, double h) {
  if (g1.vertices.empty() || g2.vertices.empty())
    throw std::invalid_argument("curve_dist: empty curve");
  if (curve_before(g2, g1)) return curve_dist(g2, g1, h);
  Curve a = refine_curve(g1, h), b = refine_curve(g2, h);
  if (!(a.closed && b.closed && b.vertices.size() > 2))
    return frechet(a.vertices, b.vertices);

  // Closed case: minimize over start vertices of b, coarse grid first,
  // then halving the stride around the best shift.
  size_t m = b.vertices.size() - 1;
  auto eval = [&](size_t s) { return frechet(a.vertices, rotate_closed(b.vertices, s)); };
  size_t stride = std::max<size_t>(1, m / 16);
  size_t best_s = 0;
  double best = eval(0);
  for (size_t s = stride; s < m; s += stride) {
    double d = eval(s);
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  while (stride > 1) {
    stride /= 2;
    for (size_t s : {(best_s + m - stride) % m, (best_s + stride) % m}) {
      double d = eval(s);
      if (d < best) {
        best = d;
        best_s = s;
      }
    }
  }
  return best;
}

double set_dist(const CurveSet& f, const CurveSet& g, double h) {
  if (f.curves.empty() || g.curves.empty())
    throw std::invalid_argument("set_dist: empty curve set");
  auto directed = [&](const CurveSet& from, const CurveSet& to) {
    double worst = 0.0;
    for (const Curve& a : from.curves) {
      double best = std::numeric_limits<double>::infinity();
      for (const Curve& b : to.curves)
        best = std::min(best, curve_dist(a, b, h));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(f, g), directed(g, f));
}

}  // namespace perclab
