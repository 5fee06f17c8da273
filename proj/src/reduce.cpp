#include "gowlab/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace gowlab {
namespace {

std::atomic<std::size_t>& configured_workers() {
  static std::atomic<std::size_t> workers{
      std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  return workers;
}

}  // namespace

std::size_t worker_count() { return configured_workers().load(); }

void set_worker_count(std::size_t workers) {
  configured_workers().store(std::max<std::size_t>(1, workers));
}

namespace {
// Nested calls from inside a worker run serially instead of spawning more threads.
thread_local bool t_in_worker = false;
}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1 || t_in_worker) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      t_in_worker = true;
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  threads.clear();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gowlab
