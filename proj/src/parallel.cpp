#include "sumlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sumlab {

namespace {
std::atomic<unsigned> g_threads{1};
thread_local bool t_in_worker = false;

unsigned resolve(unsigned n) {
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}
}  // namespace

void set_default_threads(unsigned n) { g_threads = resolve(n); }
unsigned default_threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  unsigned w = threads ? resolve(threads) : default_threads();
  if (t_in_worker || w <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  w = static_cast<unsigned>(std::min<std::size_t>(w, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < w; ++k) {
    pool.emplace_back([&] {
      t_in_worker = true;
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t parallel_sum(std::size_t n, const std::function<std::uint64_t(std::size_t)>& body) {
  std::vector<std::uint64_t> parts(n);
  parallel_for(n, [&](std::size_t i) { parts[i] = body(i); });
  std::uint64_t s = 0;
  for (std::uint64_t v : parts) s += v;
  return s;
}

}  // namespace sumlab
