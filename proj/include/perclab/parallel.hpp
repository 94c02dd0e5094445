#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace perclab {

struct ReplicaOutcome {
  bool hit = false;
  bool truncated = false;
};

struct ReplicaTotals {
  uint64_t hits = 0;
  uint64_t truncated = 0;
  uint64_t replicas = 0;
};

// Runs fn(replica_index) for replica_index in [0, replicas) on `workers`
// threads. Accumulation is by integer sums, so totals are independent of
// scheduling and of the worker count. The first exception thrown by a
// replica aborts the run and is rethrown.
inline ReplicaTotals run_replicas(
    uint64_t replicas, int workers,
    const std::function<ReplicaOutcome(uint64_t)>& fn) {
  if (workers < 1) workers = 1;
  ReplicaTotals totals;
  totals.replicas = replicas;
  if (workers == 1) {
    for (uint64_t r = 0; r < replicas; ++r) {
      ReplicaOutcome o = fn(r);
      totals.hits += o.hit ? 1 : 0;
      totals.truncated += o.truncated ? 1 : 0;
    }
    return totals;
  }
  std::atomic<uint64_t> next{0};
  std::atomic<uint64_t> hits{0}, truncated{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&]() {
    uint64_t local_hits = 0, local_trunc = 0;
    while (true) {
      uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
      if (r >= replicas) break;
      {
        std::scoped_lock lk(err_mutex);
        if (error) break;
      }
      try {
        ReplicaOutcome o = fn(r);
        local_hits += o.hit ? 1 : 0;
        local_trunc += o.truncated ? 1 : 0;
      } catch (...) {
        std::scoped_lock lk(err_mutex);
        if (!error) error = std::current_exception();
        break;
      }
    }
    hits.fetch_add(local_hits, std::memory_order_relaxed);
    truncated.fetch_add(local_trunc, std::memory_order_relaxed);
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  totals.hits = hits.load();
  totals.truncated = truncated.load();
  return totals;
}

}  // namespace perclab
