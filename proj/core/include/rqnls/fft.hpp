#pragma once

#include <cstddef>
#include <vector>

#include "rqnls/util.hpp"

namespace rqnls {

// Cached FFTW complex-to-complex plans, rank 1..3. Plans are created once
// under a lock (FFTW planning is not thread-safe) with FFTW_ESTIMATE, which
// picks the algorithm deterministically; execution on distinct arrays is
// safe from any thread. No normalization is applied here -- callers own the
// scaling convention.
class Fft {
 public:
  // dims = logical sizes, slowest-varying first; row-major contiguous data.
  static const Fft& get(const std::vector<int>& dims);

  void forward(cplx* in, cplx* out) const;   // sum f[x] e^{-2 pi i k.x/N}
  void backward(cplx* in, cplx* out) const;  // sum F[k] e^{+2 pi i k.x/N}

  std::size_t size() const { return n_; }

 private:
  Fft(const std::vector<int>& dims);
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
  std::size_t n_ = 0;
};

}  // namespace rqnls
