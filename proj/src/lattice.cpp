#include "perclab/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace perclab {

std::vector<LatticeCoord> sites_in_box(const Box& b, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("sites_in_box: delta <= 0");
  EmbeddedPoint c = axis_coords(b.center);
  double h = b.side / 2.0;
  double tol = 1e-9 * (std::abs(b.side) + 1.0);
  // Site (i,j) has axis coordinates (delta*i, delta*j).
  int64_t ilo = int64_t(std::ceil((c.x - h - tol) / delta));
  int64_t ihi = int64_t(std::floor((c.x + h + tol) / delta));
  int64_t jlo = int64_t(std::ceil((c.y - h - tol) / delta));
  int64_t jhi = int64_t(std::floor((c.y + h + tol) / delta));
  std::vector<LatticeCoord> out;
  for (int64_t j = jlo; j <= jhi; ++j)
    for (int64_t i = ilo; i <= ihi; ++i) out.push_back({i, j});
  return out;
}

namespace {

// Rotating calipers on the convex hull; used for large point sets.
double hull_diam(std::vector<EmbeddedPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  auto cross = [](EmbeddedPoint o, EmbeddedPoint a, EmbeddedPoint b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<EmbeddedPoint> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  double best = 0.0;
  size_t n = hull.size();
  if (n == 1) return 0.0;
  size_t jj = 1;
  for (size_t ii = 0; ii < n; ++ii) {
    while (true) {
      double d0 = dist(hull[ii], hull[jj % n]);
      double d1 = dist(hull[ii], hull[(jj + 1) % n]);
      if (d1 >= d0) {
        ++jj;
      } else {
        break;
      }
    }
    best = std::max(best, dist(hull[ii], hull[jj % n]));
  }
  return best;
}

}  // namespace

double diam(std::span<const EmbeddedPoint> points) {
  if (points.empty()) throw std::invalid_argument("diam: empty point set");
  if (points.size() > 64) {
    return hull_diam(std::vector<EmbeddedPoint>(points.begin(), points.end()));
  }
  double best = 0.0;
  for (size_t a = 0; a < points.size(); ++a)
    for (size_t b = a + 1; b < points.size(); ++b)
      best = std::max(best, dist(points[a], points[b]));
  return best;
}

}  // namespace perclab
