#pragma once

#include <cstdint>
#include <vector>

#include "rqnls/grid.hpp"

namespace rqnls {

// Deterministic N(0,1) stream: mt19937_64 uniforms through a plain
// Box-Muller map. Pinned here (rather than std::normal_distribution) so the
// sample sequence is stable across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();
  cplx next_complex();  // (g1 + i g2)/sqrt(2), unit variance
  std::uint64_t next_u64();

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// The standard randomized input of the verification suite: per mode j an
// amplitude <j>^-2 * complex Gaussian, profile exp(-x^2/(2 w^2)) with a
// small random plane-wave modulation exp(i m pi x / L), m in {-4..4}.
SpectralField random_field(int dim, std::int64_t J, const Grid1D& g, std::uint64_t seed,
                           double envelope_width = 1.0);

// Same decay, no x-dependence: u_j(x) = const. Used where only the mode
// amplitudes matter (sequence-space estimates).
SpectralField random_constant_field(int dim, std::int64_t J, const Grid1D& g,
                                    std::uint64_t seed);

// Gaussian wave-packet data: sum over packets of amplitude
// exp(-(x-center)^2/(2 width^2)) placed on the given mode.
struct GaussianPacket {
  ModeIndex mode;
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double velocity = 0.0;  // plane-wave factor exp(i velocity x)
};
SpectralField packet_field(int dim, std::int64_t J, const Grid1D& g,
                           const std::vector<GaussianPacket>& packets);

// Rescale so ||u||_{L^2 h^1} equals the requested value (no-op on zero).
SpectralField normalized_l2h1(SpectralField u, double target);

}  // namespace rqnls
