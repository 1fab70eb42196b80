#include "infogeom/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace infogeom {
namespace {

std::atomic<unsigned> g_workers{1};

// Leaves are only farmed out to threads when there are enough of them for the
// spawn cost to pay off.
constexpr std::size_t kMinLeavesPerWorker = 8;

double pairwise_combine(std::vector<double>& partial) {
  std::size_t count = partial.size();
  if (count == 0) return 0.0;
  while (count > 1) {
    const std::size_t half = (count + 1) / 2;
    for (std::size_t i = 0; i < count / 2; ++i) {
      partial[i] = partial[2 * i] + partial[2 * i + 1];
    }
    if (count % 2 == 1) partial[half - 1] = partial[count - 1];
    count = half;
  }
  return partial[0];
}

}  // namespace

unsigned worker_count() { return g_workers.load(std::memory_order_relaxed); }

void set_worker_count(unsigned workers) {
  g_workers.store(std::max(1u, workers), std::memory_order_relaxed);
}

void configure_workers_from_environment() {
  if (const char* env = std::getenv("INFOGEOM_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) set_worker_count(static_cast<unsigned>(value));
    } catch (const std::exception&) {
      // Malformed values leave the current setting untouched.
    }
  }
}

double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  const std::size_t leaves = (n + kSumLeafSize - 1) / kSumLeafSize;
  std::vector<double> partial(leaves, 0.0);

  auto sum_leaves = [&](std::size_t first, std::size_t last) {
    for (std::size_t leaf = first; leaf < last; ++leaf) {
      const std::size_t begin = leaf * kSumLeafSize;
      const std::size_t end = std::min(n, begin + kSumLeafSize);
      double acc = 0.0;
      for (std::size_t i = begin; i < end; ++i) acc += term(i);
      partial[leaf] = acc;
    }
  };

  const unsigned workers = worker_count();
  if (workers <= 1 || leaves < kMinLeavesPerWorker * 2) {
    sum_leaves(0, leaves);
  } else {
    const std::size_t used = std::min<std::size_t>(workers, leaves / kMinLeavesPerWorker);
    const std::size_t chunk = (leaves + used - 1) / used;
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t first = w * chunk;
      const std::size_t last = std::min(leaves, first + chunk);
      if (first >= last) break;
      pool.emplace_back(sum_leaves, first, last);
    }
    for (auto& t : pool) t.join();
  }
  return pairwise_combine(partial);
}

double deterministic_sum(std::span<const double> values) {
  return deterministic_sum(values.size(), [values](std::size_t i) { return values[i]; });
}

}  // namespace infogeom
