#include "perclab/correlation_length.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "perclab/connectivity.hpp"

namespace perclab {

namespace {

Window probe_window(int64_t n) { return Window{{0, 0}, n, n, 1.0}; }

// Every probe draws from its own replica stream so that probes stay
// independent even when the search revisits an n or p.
uint64_t probe_seed(uint64_t master, uint64_t counter) {
  return detail::mix64(master ^ (0xd1b54a32d192ed03ull * (counter + 1)));
}

struct ProbeResult {
  int decision = 0;
  ProbeLog log;
};

// Decides whether the crossing probability exceeds `threshold`, doubling
// the replica count until the 95% interval separates or the budget runs
// out. Replica streams restart per attempt; only the final attempt is
// logged.
ProbeResult gated_probe(const std::string& phase, int64_t n, double p,
                        double threshold, const SearchBudget& budget,
                        uint64_t seed, int workers, double x_logged) {
  ProbeResult r;
  uint64_t replicas = budget.replicas_init;
  uint64_t attempt = 0;
  while (true) {
    EventStats s =
        estimate_event("H", probe_window(n), p, replicas,
                       probe_seed(seed, attempt), workers,
                       [n](const PercConfig& cfg) {
                         return EventOutcome{
                             horizontal_crossing(cfg, n, Color::White), false};
                       });
    r.log = ProbeLog{phase,     x_logged, s.hits, s.replicas,
                     s.p_hat,   s.ci95,   0};
    if (s.p_hat - s.ci95 > threshold) {
      r.decision = 1;
    } else if (s.p_hat + s.ci95 < threshold) {
      r.decision = -1;
    } else if (replicas * 2 <= budget.replicas_max) {
      replicas *= 2;
      ++attempt;
      continue;
    }
    r.log.decision = r.decision;
    return r;
  }
}

}  // namespace

EventStats crossing_prob(int64_t n, double p, uint64_t replicas, uint64_t seed,
                         int workers) {
  if (n < 1) throw std::invalid_argument("crossing_prob: n < 1");
  return estimate_event("H^w(" + std::to_string(n) + ")", probe_window(n), p,
                        replicas, seed, workers, [n](const PercConfig& cfg) {
                          return EventOutcome{
                              horizontal_crossing(cfg, n, Color::White),
                              false};
                        });
}

CorrEstimate estimate_L(double p, double epsilon, int64_t n_max,
                        const SearchBudget& budget, uint64_t seed,
                        int workers) {
  if (p < 0.5 || p > 1.0)
    throw std::invalid_argument("estimate_L: need 1/2 <= p <= 1");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("estimate_L: need 0 < epsilon < 1/2");
  if (n_max < 1) throw std::invalid_argument("estimate_L: n_max < 1");
  const double threshold = 0.5 + epsilon;

  CorrEstimate est;
  est.p = p;
  est.epsilon = epsilon;
  est.confident = true;
  uint64_t counter = 0;

  // Doubling phase: first n with certified exceedance.
  int64_t below = 0;   // largest n certified (or assumed) below threshold
  int64_t above = -1;  // smallest n certified above
  for (int64_t n = 1; n <= n_max; n = n < n_max && 2 * n > n_max ? n_max : 2 * n) {
    ProbeResult pr = gated_probe("doubling", n, p, threshold, budget,
                                 probe_seed(seed, counter++), workers,
                                 double(n));
    est.probes.push_back(pr.log);
    int d = pr.decision;
    if (d == 0) {
      est.confident = false;
      d = pr.log.p_hat > threshold ? 1 : -1;
    }
    if (d > 0) {
      above = n;
      break;
    }
    below = n;
    if (n == n_max) break;
  }
  if (above < 0) {
    est.exceeds_n_max = true;
    est.n_hat = -1;
    est.n_low = below + 1;
    est.n_high = -1;
    est.confident = false;
    return est;
  }

  // Bisection phase.
  int64_t lo = below, hi = above;
  while (hi - lo > 1 &&
         double(hi - lo) > std::max(1.0, budget.bracket_rtol * double(hi))) {
    int64_t mid = lo + (hi - lo) / 2;
    ProbeResult pr = gated_probe("bisection", mid, p, threshold, budget,
                                 probe_seed(seed, counter++), workers,
                                 double(mid));
    est.probes.push_back(pr.log);
    int d = pr.decision;
    if (d == 0) {
      est.confident = false;
      d = pr.log.p_hat > threshold ? 1 : -1;
    }
    (d > 0 ? hi : lo) = mid;
  }
  est.n_hat = hi;
  est.n_low = lo + 1;
  est.n_high = hi;
  return est;
}

PPlusEstimate estimate_p_plus(int64_t n, double epsilon, double p_tol,
                              const SearchBudget& budget, uint64_t seed,
                              int workers) {
  if (n < 1) throw std::invalid_argument("estimate_p_plus: n < 1");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("estimate_p_plus: need 0 < epsilon < 1/2");
  if (!(p_tol > 0.0)) throw std::invalid_argument("estimate_p_plus: p_tol <= 0");
  const double threshold = 0.5 + epsilon;

  PPlusEstimate est;
  est.n = n;
  est.epsilon = epsilon;
  est.confident = true;
  uint64_t counter = 0;
  double lo = 0.5, hi = 1.0;
  while (hi - lo > p_tol) {
    double mid = 0.5 * (lo + hi);
    ProbeResult pr = gated_probe("bisection", n, mid, threshold, budget,
                                 probe_seed(seed, counter++), workers, mid);
    est.probes.push_back(pr.log);
    int d = pr.decision;
    if (d == 0) {
      est.confident = false;
      d = pr.log.p_hat > threshold ? 1 : -1;
    }
    (d > 0 ? hi : lo) = mid;
  }
  est.p_low = lo;
  est.p_high = hi;
  est.p_hat = 0.5 * (lo + hi);
  return est;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_power_law: need >= 3 points");
  std::set<double> seen;
  std::vector<double> xs, ys;
  for (auto [p, L] : points) {
    if (p <= 0.5) throw std::invalid_argument("fit_power_law: need p > 1/2");
    if (L <= 0.0) throw std::invalid_argument("fit_power_law: need L > 0");
    if (!seen.insert(p).second)
      throw std::invalid_argument("fit_power_law: duplicate p");
    xs.push_back(std::log(p - 0.5));
    ys.push_back(std::log(L));
  }
  LinearFit f = linear_fit(xs, ys);
  return PowerLawFit{f.slope, f.intercept, f.r_squared};
}

}  // namespace perclab
