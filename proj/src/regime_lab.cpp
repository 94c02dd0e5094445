#include "perclab/regime_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "perclab/connectivity.hpp"
#include "perclab/interface_loops.hpp"
#include "perclab/parallel.hpp"

namespace perclab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return "Trivial";
    case Verdict::Critical: return "Critical";
    case Verdict::NearCritical: return "NearCritical";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

namespace {

// Square-ish window whose embedded extent along both lattice axes is
// `side`, at spacing delta.
Window level_window(double side, double delta) {
  int64_t l = std::llround(side / delta);
  if (l < 4) throw std::invalid_argument("window too small for spacing");
  return Window{{0, 0}, l, l, delta};
}

uint64_t level_seed(uint64_t master, size_t level, uint64_t salt) {
  return detail::mix64(master ^ (0x9e3779b97f4a7c15ull * (level + 1)) ^ salt);
}

constexpr double kMonotoneSlack = 1.10;  // 10% slack on CI-noisy sequences
constexpr double kTruncationCap = 0.20;

// Dyadic annulus k scaled to a window of side S: inner box side S/2^k,
// outer box side S/2^(k-1). Only odd k are probed (independence).
Annulus dyadic_annulus(EmbeddedPoint center, double side, int k) {
  return Annulus{center, side * std::pow(0.5, k), side * std::pow(0.5, k - 1)};
}

struct LoopSample {
  bool exists = false;
  bool truncated = false;
  double largest_diam = 0.0;
  bool macro = false;
  uint32_t f_bits = 0;  // bit k set when annulus k holds a surrounding loop
};

// One shared pass over the level's replicas; every per-replica statistic
// lands in its own slot, so totals are worker-count independent.
std::vector<LoopSample> sample_level(const Window& w, double p,
                                     uint64_t replicas, uint64_t seed,
                                     int workers, double side,
                                     std::span<const int> f_ks) {
  EmbeddedPoint center = embed(window_center_site(w), w.delta);
  std::vector<LoopSample> slots(replicas);
  run_replicas(replicas, workers, [&](uint64_t r) {
    PercConfig cfg = sample(w, p, seed, uint32_t(r));
    LoopSet ls = trace_loops(cfg);
    LoopSample& s = slots[r];
    LargestLoopResult lr = largest_loop_around(ls, center);
    s.truncated = lr.truncated;
    if (lr.loop) {
      s.exists = true;
      s.largest_diam = lr.loop->diameter;
      s.macro = lr.loop->diameter >= side / 4.0;
    }
    for (int k : f_ks)
      if (count_in_annulus(ls, dyadic_annulus(center, side, k), center) >= 1)
        s.f_bits |= 1u << k;
    return ReplicaOutcome{false, false};
  });
  return slots;
}

}  // namespace

std::pair<double, double> near_critical_band(double delta, double eps1,
                                             double eps2,
                                             const SearchBudget& budget,
                                             uint64_t seed, int workers) {
  if (!(eps1 > 0.0 && eps1 < eps2 && eps2 < 0.5))
    throw std::invalid_argument("near_critical_band: need 0 < eps1 < eps2 < 1/2");
  int64_t n = std::max<int64_t>(1, std::llround(1.0 / delta));
  // p_plus(n) - 1/2 scales like n^(-3/4); the tolerance must track it or
  // the band collapses inside the bisection grid.
  double p_tol = std::max(1.0 / 4096.0, 0.25 * std::pow(double(n), -0.75));
  PPlusEstimate lo = estimate_p_plus(n, eps1, p_tol, budget, seed, workers);
  PPlusEstimate hi =
      estimate_p_plus(n, eps2, p_tol, budget, detail::mix64(seed + 1), workers);
  // probes adjacent to the threshold are inherently unresolvable, so a
  // non-confident bisection still yields a usable p_tol-wide bracket
  return {lo.p_hat, std::max(lo.p_hat, hi.p_hat)};
}

Verdict classify(std::span<const ScaledBracket> brackets, double t_low,
                 double t_high) {
  if (brackets.size() < 3) return Verdict::Undetermined;
  bool all_below = true, all_above = true, all_within = true;
  bool hi_nonincreasing = true, lo_nondecreasing = true;
  for (size_t j = 0; j < brackets.size(); ++j) {
    const ScaledBracket& b = brackets[j];
    if (!(b.hi < t_low)) all_below = false;
    if (!(b.lo > t_high)) all_above = false;
    if (!(b.lo >= t_low && b.hi <= t_high)) all_within = false;
    if (j > 0) {
      if (!(brackets[j].hi <= brackets[j - 1].hi * kMonotoneSlack))
        hi_nonincreasing = false;
      if (!(brackets[j].lo * kMonotoneSlack >= brackets[j - 1].lo))
        lo_nondecreasing = false;
    }
  }
  if (all_below && hi_nonincreasing) return Verdict::Trivial;
  if (all_above && lo_nondecreasing) return Verdict::Critical;
  if (all_within) return Verdict::NearCritical;
  return Verdict::Undetermined;
}

RegimeReport run_sweep(const SweepSpec& spec) {
  if (spec.deltas.size() < 3)
    throw std::invalid_argument("run_sweep: need >= 3 spacing levels");
  for (size_t j = 1; j < spec.deltas.size(); ++j)
    if (!(spec.deltas[j] < spec.deltas[j - 1]))
      throw std::invalid_argument("run_sweep: deltas must strictly decrease");
  if (!spec.p_override.empty() && spec.p_override.size() != spec.deltas.size())
    throw std::invalid_argument("run_sweep: p_override size mismatch");
  if (spec.lambda < 0)
    throw std::invalid_argument("run_sweep: negative lambda (swap colors upstream)");

  const double S = spec.window_side;
  const std::vector<int> f_ks = {3, 5};
  RegimeReport report;
  std::vector<ScaledBracket> brackets;

  for (size_t j = 0; j < spec.deltas.size(); ++j) {
    double delta = spec.deltas[j];
    double p = spec.p_override.empty()
                   ? 0.5 + spec.lambda * std::pow(delta, spec.alpha)
                   : spec.p_override[j];
    if (p < 0.5 || p > 1.0)
      throw std::invalid_argument("run_sweep: p_j outside [1/2, 1]");

    LevelReport lvl;
    lvl.delta = delta;
    lvl.p = p;

    // (d) certified scaled correlation-length bracket. The probe ceiling
    // only needs to clear the Critical threshold in window-side units.
    int64_t n_max = int64_t(std::ceil(1.25 * spec.t_high * S / delta));
    SearchBudget b = spec.budget;
    b.bracket_rtol = std::max(b.bracket_rtol, 0.125);
    lvl.corr = estimate_L(p, spec.epsilon, n_max, b,
                          level_seed(spec.seed, j, 0xC0),
                          spec.workers);
    lvl.scaled.lo = delta * double(lvl.corr.n_low) / S;
    lvl.scaled.hi = lvl.corr.exceeds_n_max
                        ? std::numeric_limits<double>::infinity()
                        : delta * double(lvl.corr.n_high) / S;
    lvl.scaled.confident = lvl.corr.confident || lvl.corr.exceeds_n_max;

    // (a)-(c) one shared replica pass for the loop statistics.
    Window w = level_window(S, delta);
    std::vector<LoopSample> samples = sample_level(
        w, p, spec.replicas, level_seed(spec.seed, j, 0x10), spec.workers, S,
        f_ks);

    uint64_t n = samples.size();
    uint64_t exists = 0, macro = 0, truncated = 0;
    std::vector<uint64_t> fk_hits(f_ks.size(), 0);
    for (const LoopSample& s : samples) {
      exists += s.exists;
      macro += s.macro;
      truncated += s.truncated;
      for (size_t q = 0; q < f_ks.size(); ++q)
        fk_hits[q] += (s.f_bits >> f_ks[q]) & 1u;
    }
    lvl.truncated = truncated;
    lvl.truncation_rate = double(truncated) / double(n);
    lvl.macro_loop = EventStats::from_counts("macro_loop", macro, n, truncated);
    lvl.loop_exists = EventStats::from_counts("loop_exists", exists, n, truncated);
    for (size_t q = 0; q < f_ks.size(); ++q) {
      lvl.f_k_index.push_back(f_ks[q]);
      lvl.f_k.push_back(EventStats::from_counts(
          "F_" + std::to_string(f_ks[q]), fk_hits[q], n, truncated));
    }
    lvl.g_grid.resize(8);
    for (size_t q = 0; q < 8; ++q) lvl.g_grid[q] = S * double(q + 1) / 8.0;
    for (double L : lvl.g_grid) {
      uint64_t cond = 0, uncond = 0;
      for (const LoopSample& s : samples) {
        bool le = s.exists && s.largest_diam <= L + 1e-12;
        cond += le;
        uncond += le || !s.exists;
      }
      lvl.g_conditional.push_back(
          EventStats::from_counts("G_cond", cond, exists ? exists : 1));
      lvl.g_unconditional.push_back(
          EventStats::from_counts("G_uncond", uncond, n));
    }
    lvl.none_count = n - exists;
    lvl.aborted = lvl.truncation_rate > kTruncationCap;

    // The bracket comes from the crossing-probability stage and stays valid
    // even when the loop statistics of the level are truncation-aborted.
    brackets.push_back(lvl.scaled);
    report.levels.push_back(std::move(lvl));
  }

  report.verdict = classify(brackets, spec.t_low, spec.t_high);
  return report;
}

LoopCdf largest_loop_cdf(double delta, double p, double window_side,
                         std::span<const double> grid, uint64_t replicas,
                         uint64_t seed, int workers) {
  if (grid.empty()) throw std::invalid_argument("largest_loop_cdf: empty grid");
  Window w = level_window(window_side, delta);
  std::vector<LoopSample> samples = sample_level(
      w, p, replicas, seed, workers, window_side, std::span<const int>{});
  LoopCdf out;
  out.grid.assign(grid.begin(), grid.end());
  std::sort(out.grid.begin(), out.grid.end());
  out.replicas = replicas;
  uint64_t exists = 0;
  for (const LoopSample& s : samples) {
    exists += s.exists;
    out.truncated += s.truncated;
  }
  out.none_count = replicas - exists;
  out.aborted = double(out.truncated) / double(replicas) > kTruncationCap;
  for (double L : out.grid) {
    uint64_t cond = 0, uncond = 0;
    for (const LoopSample& s : samples) {
      bool le = s.exists && s.largest_diam <= L + 1e-12;
      cond += le;
      uncond += le || !s.exists;
    }
    out.conditional.push_back(
        EventStats::from_counts("G_cond", cond, exists ? exists : 1));
    out.unconditional.push_back(
        EventStats::from_counts("G_uncond", uncond, replicas));
  }
  return out;
}

}  // namespace perclab
