#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqnls {

using cplx = std::complex<double>;

// Global worker count used by parallel_for. Results never depend on it:
// workers only ever write disjoint output ranges, all floating-point
// reductions are serial pairwise sums over precomputed arrays.
int thread_count();
void set_thread_count(int n);

// Run fn(i) for i in [0, n). Each index must touch only its own outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Chunked variant: fn(begin, end) on disjoint ranges.
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn);

// Pairwise (cascade) summation. Fixed association order, independent of
// thread count, and far more accurate than naive left-to-right.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// Smallest n' >= n whose prime factors are all in {2,3,5,7} (fast FFTW sizes).
std::size_t next_fast_fft_size(std::size_t n);

// Exact integer square root test: returns true and sets r if n = r*r.
bool perfect_square(std::int64_t n, std::int64_t& r);

// Japanese bracket <x> = sqrt(1+x^2) with x^2 = norm_sq already formed.
double bracket_from_norm_sq(std::int64_t norm_sq);

[[noreturn]] void fail(const std::string& msg);

}  // namespace rqnls
