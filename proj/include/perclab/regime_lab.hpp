#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "perclab/correlation_length.hpp"
#include "perclab/stats.hpp"

namespace perclab {

enum class Verdict { Trivial, Critical, NearCritical, Undetermined };
std::string to_string(Verdict v);

// Sweep over a decreasing spacing sequence delta_j at densities
// p_j = 1/2 + lambda * delta_j^alpha (or the explicit p_override list).
struct SweepSpec {
  double alpha = 0.75;
  double lambda = 1.0;
  std::vector<double> deltas;   // strictly decreasing, positive
  std::vector<double> p_override;  // when nonempty, one p per delta
  double epsilon = 0.1;
  double window_side = 1.0;
  uint64_t replicas = 2000;
  uint64_t seed = 0;
  double t_low = 0.3;
  double t_high = 3.0;
  SearchBudget budget;
  int workers = 1;
};

// Certified bracket of the scaled correlation length delta * L_eps(p),
// in window-side units. hi = +inf encodes the exceeds-n_max sentinel.
struct ScaledBracket {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool confident = false;
};

struct LevelReport {
  double delta = 0.0;
  double p = 0.0;
  CorrEstimate corr;
  ScaledBracket scaled;
  EventStats macro_loop;   // surrounding loop of diameter >= window/4
  EventStats loop_exists;  // any loop surrounds the center
  std::vector<int> f_k_index;      // odd dyadic annulus indices probed
  std::vector<EventStats> f_k;     // >= 1 surrounding loop inside annulus k
  std::vector<double> g_grid;      // diameter grid for the largest-loop CDF
  std::vector<EventStats> g_conditional;    // diam <= L among existing loops
  std::vector<EventStats> g_unconditional;  // none-outcomes counted as hits
  uint64_t none_count = 0;
  uint64_t truncated = 0;
  double truncation_rate = 0.0;
  bool aborted = false;  // truncation rate above the 20% cap
};

struct RegimeReport {
  Verdict verdict = Verdict::Undetermined;
  std::vector<LevelReport> levels;
};

// Band [p_plus_{eps1}(round(1/delta)), p_plus_{eps2}(round(1/delta))]; any
// density inside keeps the scaled correlation length bounded away from 0
// and infinity along the sequence.
std::pair<double, double> near_critical_band(double delta, double eps1,
                                             double eps2,
                                             const SearchBudget& budget,
                                             uint64_t seed, int workers = 1);

// Trichotomy on certified scaled brackets (window-side units):
// Trivial when every bracket sits below t_low and the upper ends are
// non-increasing; Critical when every bracket sits above t_high and the
// lower ends are non-decreasing (sentinels count as above); NearCritical
// when every bracket lies inside [t_low, t_high]; otherwise Undetermined.
Verdict classify(std::span<const ScaledBracket> brackets, double t_low,
                 double t_high);

RegimeReport run_sweep(const SweepSpec& spec);

// Empirical CDF of the largest surrounding loop's diameter at one level.
struct LoopCdf {
  std::vector<double> grid;
  std::vector<EventStats> conditional;
  std::vector<EventStats> unconditional;
  uint64_t none_count = 0;
  uint64_t truncated = 0;
  uint64_t replicas = 0;
  bool aborted = false;
};
LoopCdf largest_loop_cdf(double delta, double p, double window_side,
                         std::span<const double> grid, uint64_t replicas,
                         uint64_t seed, int workers = 1);

}  // namespace perclab
