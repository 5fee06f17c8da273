#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gowlab {

/// Streaming pairwise (cascade) summation. Partial sums are merged along a
/// binary counter, so the result depends only on the order of add() calls.
template <typename T>
class PairwiseSum {
 public:
  void add(const T& x) {
    T carry = x;
    std::uint64_t c = count_++;
    int level = 0;
    while (c & 1) {
      carry = partial_[level] + carry;
      c >>= 1;
      ++level;
    }
    partial_[level] = carry;
  }

  T total() const {
    T acc{};
    bool first = true;
    for (int level = 0; level < 64; ++level) {
      if ((count_ >> level) & 1) {
        acc = first ? partial_[level] : partial_[level] + acc;
        first = false;
      }
    }
    return acc;
  }

  std::uint64_t count() const noexcept { return count_; }

 private:
  std::array<T, 65> partial_{};
  std::uint64_t count_ = 0;
};

template <typename T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// Number of worker threads used by the parallel reductions. Defaults to the
/// hardware concurrency; 1 forces serial execution.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

/// Evaluates `job(i)` for i in [0, count) on the worker pool and returns the
/// pairwise sum of the results in index order. Each job runs serially, so the
/// result is bit-identical for every worker count.
template <typename T>
T parallel_sum(std::size_t count, const std::function<T(std::size_t)>& job);

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

template <typename T>
T parallel_sum(std::size_t count, const std::function<T(std::size_t)>& job) {
  std::vector<T> parts(count);
  parallel_for(count, [&](std::size_t i) { parts[i] = job(i); });
  return pairwise_sum<T>(parts);
}

}  // namespace gowlab
