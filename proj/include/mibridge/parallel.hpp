#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace mibridge {

template <typename T>
struct TaskOutcome {
  std::optional<T> value;
  std::string error;  // empty on success
};

/// Runs fn(0), ..., fn(n - 1) on `workers` threads and returns the outcomes
/// in index order. Exceptions derived from std::exception are captured per
/// task; results do not depend on the number of workers as long as fn(i)
/// depends only on i.
template <typename T, typename Fn>
std::vector<TaskOutcome<T>> parallel_map(std::size_t n, std::size_t workers, Fn fn) {
  std::vector<TaskOutcome<T>> out(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i].value.emplace(fn(i));
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  if (workers <= 1 || n <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers && w < n; ++w) pool.emplace_back(work);
  pool.clear();
  return out;
}

}  // namespace mibridge
