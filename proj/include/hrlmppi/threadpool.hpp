#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hrlmppi {

// Persistent worker pool for embarrassingly parallel index loops. Results
// must be written to disjoint per-index slots; reduction order is then up to
// the caller, which keeps runs deterministic regardless of thread count.
class ThreadPool {
 public:
  explicit ThreadPool(int n_threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  void parallel_for(int n, const std::function<void(int)>& fn);
  int size() const { return static_cast<int>(workers_.size()) + 1; }

  // Shared pool sized from HRLMPPI_THREADS (default: hardware concurrency).
  static ThreadPool& global();

 private:
  void worker_loop();

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)>* job_ = nullptr;
  std::atomic<int> next_{0};
  std::atomic<int> completed_{0};
  int total_ = 0;
  int active_ = 0;  // workers currently inside a drain loop
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace hrlmppi
