#include "absis/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace absis {

int thread_count() {
  static const int n = [] {
    if (const char* env = std::getenv("ABSIS_THREADS")) {
      const int v = std::atoi(env);
      return v >= 1 ? v : 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return n;
}

namespace {

thread_local bool inside_pool_task = false;

// Fixed pool of thread_count() - 1 background workers; the caller drains
// alongside them. Work items are claimed off a shared atomic counter, so the
// split adapts to stragglers. Determinism is the caller's job: every index
// must carry its own RNG stream, and cross-index reductions happen after
// run() returns. run() does not return while any worker is still inside a
// job, which is what makes back-to-back jobs safe.
class WorkerPool {
public:
  WorkerPool() {
    const int workers = thread_count() - 1;
    for (int i = 0; i < workers; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  bool serial() const { return threads_.empty(); }

  void run(int n, const std::function<void(int)>& fn) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      fn_ = &fn;
      size_ = n;
      next_.store(0, std::memory_order_relaxed);
      remaining_.store(n, std::memory_order_relaxed);
      ++generation_;
    }
    wake_.notify_all();
    drain(&fn, n);
    {
      std::unique_lock<std::mutex> lock(mutex_);
      done_.wait(lock, [this] {
        return remaining_.load(std::memory_order_acquire) == 0 && active_ == 0;
      });
      fn_ = nullptr;
    }
  }

private:
  void drain(const std::function<void(int)>* fn, int n) {
    inside_pool_task = true;
    for (;;) {
      const int i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      (*fn)(i);
      remaining_.fetch_sub(1, std::memory_order_acq_rel);
    }
    inside_pool_task = false;
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(int)>* fn = nullptr;
      int n = 0;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        wake_.wait(lock, [this, seen] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        fn = fn_;
        n = size_;
        if (fn == nullptr) continue;  // job already retired
        ++active_;
      }
      drain(fn, n);
      {
        std::lock_guard<std::mutex> lock(mutex_);
        --active_;
        if (active_ == 0 && remaining_.load(std::memory_order_acquire) == 0) {
          done_.notify_all();
        }
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(int)>* fn_ = nullptr;
  int size_ = 0;
  int active_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::atomic<int> next_{0};
  std::atomic<int> remaining_{0};
};

}  // namespace

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  static WorkerPool pool;
  if (n == 1 || pool.serial() || inside_pool_task) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  pool.run(n, fn);
}

}  // namespace absis
