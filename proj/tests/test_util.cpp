#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "rqnls/util.hpp"

using namespace rqnls;

TEST_CASE("pairwise sum matches exact rational sums") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / 64.0;  // exact in binary
  CHECK(pairwise_sum(v) == doctest::Approx(1000.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("pairwise sum is independent of thread count") {
  std::vector<double> v(4097);
  double x = 0.1;
  for (auto& e : v) {
    e = std::sin(x) * 1e-3;
    x += 0.37;
  }
  const double s1 = pairwise_sum(v);
  set_thread_count(1);
  const double a = pairwise_sum(v);
  set_thread_count(7);
  const double b = pairwise_sum(v);
  CHECK(a == s1);
  CHECK(b == s1);
  set_thread_count(0);
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1237, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1237);
  CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
}

TEST_CASE("next_fast_fft_size returns 7-smooth sizes") {
  CHECK(next_fast_fft_size(1) == 2);
  CHECK(next_fast_fft_size(11) == 12);
  CHECK(next_fast_fft_size(42) == 42);
  CHECK(next_fast_fft_size(97) == 98);
  for (std::size_t n : {13u, 61u, 121u, 509u}) {
    std::size_t f = next_fast_fft_size(n);
    CHECK(f >= n);
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (f % p == 0) f /= p;
    CHECK(f == 1);
  }
}

TEST_CASE("perfect_square detects exact squares only") {
  std::int64_t r = 0;
  CHECK(perfect_square(0, r));
  CHECK(r == 0);
  CHECK(perfect_square(1ll << 40, r));
  CHECK(r == (1ll << 20));
  CHECK(!perfect_square(2, r));
  CHECK(!perfect_square(-4, r));
  CHECK(perfect_square(99980001, r));
  CHECK(r == 9999);
  CHECK(!perfect_square(99980002, r));
}
