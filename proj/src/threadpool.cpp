#include "hrlmppi/threadpool.hpp"

#include <cstdlib>

namespace hrlmppi {

ThreadPool::ThreadPool(int n_threads) {
  const int extra = std::max(0, n_threads - 1);  // caller thread participates
  workers_.reserve(extra);
  for (int i = 0; i < extra; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
  std::uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      ++active_;
    }
    for (;;) {
      const int i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= total_) break;
      (*job_)(i);
      completed_.fetch_add(1, std::memory_order_acq_rel);
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      --active_;
      done_cv_.notify_all();
    }
  }
}

void ThreadPool::parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  // concurrent callers (parallel seed workers) fall back to inline loops
  std::unique_lock<std::mutex> dispatch(dispatch_mutex_, std::try_to_lock);
  if (!dispatch.owns_lock() || workers_.empty() || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  {
    // no worker is in a drain loop here: the previous call waited for
    // active_ == 0 before returning
    std::lock_guard<std::mutex> lock(mutex_);
    job_ = &fn;
    total_ = n;
    next_.store(0, std::memory_order_relaxed);
    completed_.store(0, std::memory_order_relaxed);
    ++generation_;
  }
  start_cv_.notify_all();
  for (;;) {
    const int i = next_.fetch_add(1, std::memory_order_relaxed);
    if (i >= total_) break;
    fn(i);
    completed_.fetch_add(1, std::memory_order_acq_rel);
  }
  std::unique_lock<std::mutex> lock(mutex_);
  done_cv_.wait(lock, [&] {
    return active_ == 0 && completed_.load(std::memory_order_acquire) == total_;
  });
  job_ = nullptr;
}

ThreadPool& ThreadPool::global() {
  static ThreadPool pool([] {
    if (const char* env = std::getenv("HRLMPPI_THREADS")) {
      const int n = std::atoi(env);
      if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }());
  return pool;
}

}  // namespace hrlmppi
