#include "rqnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace rqnls {

namespace {
std::mutex g_plan_mutex;
std::map<std::vector<int>, std::unique_ptr<Fft>>& plan_cache() {
  static auto* cache = new std::map<std::vector<int>, std::unique_ptr<Fft>>();
  return *cache;
}
}  // namespace

Fft::Fft(const std::vector<int>& dims) {
  n_ = 1;
  for (int d : dims) n_ *= static_cast<std::size_t>(d);
  std::vector<fftw_complex> proto(n_);
  // FFTW_UNALIGNED lets the plan run on plain std::vector storage.
  fwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), proto.data(),
                       proto.data(), FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), proto.data(),
                       proto.data(), FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!fwd_ || !bwd_) fail("fftw plan creation failed");
}

const Fft& Fft::get(const std::vector<int>& dims) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(dims);
  if (it == cache.end()) it = cache.emplace(dims, std::unique_ptr<Fft>(new Fft(dims))).first;
  return *it->second;
}

void Fft::forward(cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), reinterpret_cast<fftw_complex*>(in),
                   reinterpret_cast<fftw_complex*>(out));
}

void Fft::backward(cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(in),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace rqnls
