#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace perclab {

// 95% binomial interval half-width: normal approximation with continuity
// correction, z = 1.96.
inline double binomial_ci95(uint64_t hits, uint64_t n) {
  if (n == 0) throw std::invalid_argument("binomial_ci95: n == 0");
  double ph = double(hits) / double(n);
  return 1.96 * std::sqrt(ph * (1.0 - ph) / double(n)) + 0.5 / double(n);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

inline LinearFit linear_fit(std::span<const double> xs,
                            std::span<const double> ys) {
  size_t n = xs.size();
  if (n != ys.size() || n < 2)
    throw std::invalid_argument("linear_fit: need >= 2 points");
  double sx = 0, sy = 0;
  for (size_t k = 0; k < n; ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t k = 0; k < n; ++k) {
    double dx = xs[k] - mx, dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = syy - f.slope * sxy;  // residual sum of squares
  if (ssr < 0) ssr = 0;
  f.r_squared = syy > 0 ? 1.0 - ssr / syy : 1.0;
  if (n > 2) f.slope_stderr = std::sqrt(ssr / double(n - 2) / sxx);
  return f;
}

// Frequency and confidence interval of a named percolation event.
struct EventStats {
  std::string event;
  uint64_t hits = 0;
  uint64_t replicas = 0;
  double p_hat = 0.0;
  double ci95 = 0.0;
  uint64_t truncated = 0;

  static EventStats from_counts(std::string name, uint64_t hits,
                                uint64_t replicas, uint64_t truncated = 0) {
    EventStats s;
    s.event = std::move(name);
    s.hits = hits;
    s.replicas = replicas;
    s.p_hat = replicas ? double(hits) / double(replicas) : 0.0;
    s.ci95 = replicas ? binomial_ci95(hits, replicas) : 0.0;
    s.truncated = truncated;
    return s;
  }
};

}  // namespace perclab
