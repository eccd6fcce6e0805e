#ifndef COMMITPAY_PARALLEL_HPP
#define COMMITPAY_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace commitpay {

/// Evaluates `fn(i)` for i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency) and returns results in index order. If any call
/// throws, the exception with the smallest index is rethrown.
template <typename Fn>
auto map_indices(std::size_t count, Fn&& fn, unsigned threads = 0) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Index of the first maximal element under `less`, or -1 when nothing is
/// eligible. Ties keep the lowest index regardless of evaluation order.
template <typename T, typename Eligible, typename Less>
long first_argmax(const std::vector<T>& items, Eligible&& eligible, Less&& less) {
  long best = -1;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!eligible(items[i])) continue;
    if (best < 0 || less(items[best], items[i])) best = static_cast<long>(i);
  }
  return best;
}

}  // namespace commitpay

#endif  // COMMITPAY_PARALLEL_HPP
