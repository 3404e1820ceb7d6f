#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace eklab {

/// 0 means "all hardware threads".
[[nodiscard]] inline std::size_t resolve_threads(std::size_t requested) noexcept {
  if (requested != 0) return requested;
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs work(i) for i in [0, count) on up to `threads` workers and hands
/// every result to consume(i, result) on the calling thread in index order.
/// Consumers therefore see the same sequence for any thread count, which is
/// what keeps floating-point reductions and dumps reproducible.
template <class Work, class Consume>
void ordered_parallel(std::size_t count, std::size_t threads, Work&& work,
                      Consume&& consume) {
  using Result = decltype(work(std::size_t{}));
  threads = resolve_threads(threads);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) consume(i, work(i));
    return;
  }
  for (std::size_t start = 0; start < count; start += threads) {
    const std::size_t stop = std::min(count, start + threads);
    std::vector<std::optional<Result>> slots(stop - start);
    std::vector<std::exception_ptr> errors(stop - start);
    {
      std::vector<std::jthread> pool;
      pool.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        pool.emplace_back([&, i] {
          try {
            slots[i - start].emplace(work(i));
          } catch (...) {
            errors[i - start] = std::current_exception();
          }
        });
      }
    }
    for (std::size_t i = start; i < stop; ++i) {
      if (errors[i - start]) std::rethrow_exception(errors[i - start]);
      consume(i, std::move(*slots[i - start]));
    }
  }
}

}  // namespace eklab
