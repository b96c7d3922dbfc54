#include "rqnls/util.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace rqnls {

namespace {
std::atomic<int> g_threads{0};

int default_threads() {
  if (const char* env = std::getenv("RQNLS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

int thread_count() {
  int n = g_threads.load(std::memory_order_relaxed);
  if (n <= 0) {
    n = default_threads();
    g_threads.store(n, std::memory_order_relaxed);
  }
  return n;
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 1); }

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t nt =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n ? n : 1);
  if (nt <= 1 || n < 2) {
    if (n) fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  parallel_for_chunks(n, [&fn](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

namespace {
template <typename T>
T pairwise_impl(const T* v, std::size_t n) {
  if (n <= 8) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_impl(v, h) + pairwise_impl(v + h, n - h);
}
}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_impl(v.data(), v.size()); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise_impl(v.data(), v.size()); }

std::size_t next_fast_fft_size(std::size_t n) {
  if (n < 2) return 2;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

bool perfect_square(std::int64_t n, std::int64_t& r) {
  if (n < 0) return false;
  auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  for (std::int64_t c = std::max<std::int64_t>(0, s - 2); c <= s + 2; ++c) {
    if (c * c == n) {
      r = c;
      return true;
    }
  }
  return false;
}

double bracket_from_norm_sq(std::int64_t norm_sq) {
  return std::sqrt(1.0 + static_cast<double>(norm_sq));
}

void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace rqnls
