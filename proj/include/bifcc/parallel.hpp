#pragma once

#include <cstddef>
#include <functional>

namespace bifcc {

/// Number of worker threads: hardware concurrency capped by BIFCC_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on worker_count() threads. Work is split in
/// contiguous static chunks, so any per-index output is deterministic.
/// The first exception thrown by a worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum in index order.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bifcc
