#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perclab/stats.hpp"

namespace perclab {

// One CI-gated probe of a threshold search. `x` is the probed n (doubling /
// bisection over box sizes) or p (bisection over densities). decision:
// +1 the 95% interval lies above the threshold, -1 below, 0 unresolved
// within the replica budget.
struct ProbeLog {
  std::string phase;  // doubling | bisection
  double x = 0.0;
  uint64_t hits = 0;
  uint64_t replicas = 0;
  double p_hat = 0.0;
  double ci95 = 0.0;
  int decision = 0;
};

// Per-probe replica schedule: start at `replicas_init`, double until the
// interval separates from the threshold or `replicas_max` is exhausted.
// bracket_rtol > 0 lets the n-bisection stop early once
// n_high - n_low <= max(1, bracket_rtol * n_high).
struct SearchBudget {
  uint64_t replicas_init = 256;
  uint64_t replicas_max = 32768;
  double bracket_rtol = 0.0;
};

// Correlation-length estimate: the smallest box side n (lattice units)
// whose white crossing probability exceeds 1/2 + epsilon, bracketed by
// certified probes. exceeds_n_max is the infinite-length sentinel.
struct CorrEstimate {
  double p = 0.0;
  double epsilon = 0.0;
  int64_t n_hat = -1;
  int64_t n_low = 0;
  int64_t n_high = -1;
  bool exceeds_n_max = false;
  bool confident = false;
  std::vector<ProbeLog> probes;
};

// Density threshold estimate at fixed box side n.
struct PPlusEstimate {
  int64_t n = 0;
  double epsilon = 0.0;
  double p_hat = 0.0;
  double p_low = 0.0;
  double p_high = 0.0;
  bool confident = false;
  std::vector<ProbeLog> probes;
};

struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// White horizontal crossing probability of the canonical n-box. The event
// is combinatorial, so estimation runs at spacing 1.
EventStats crossing_prob(int64_t n, double p, uint64_t replicas, uint64_t seed,
                         int workers = 1);

// Doubling search on n followed by bisection, every probe CI-gated.
// Requires 1/2 <= p <= 1; p = 1/2 is expected to hit the sentinel.
CorrEstimate estimate_L(double p, double epsilon, int64_t n_max,
                        const SearchBudget& budget, uint64_t seed,
                        int workers = 1);

// CI-gated bisection in p over [1/2, 1] down to bracket width p_tol.
PPlusEstimate estimate_p_plus(int64_t n, double epsilon, double p_tol,
                              const SearchBudget& budget, uint64_t seed,
                              int workers = 1);

// Least-squares line through (log(p - 1/2), log L); exponent is the slope.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

}  // namespace perclab
