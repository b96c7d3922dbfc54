#include "rqnls/fields.hpp"

#include <cmath>

namespace rqnls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// xoshiro256** -- small, fast, and fully specified here so streams never
// depend on the standard library's engine internals.
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

GaussianStream::GaussianStream(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t GaussianStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on two uniforms in (0,1].
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740993.0);
  const double u2 = static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * kPi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cplx GaussianStream::next_complex() {
  const double re = next();
  const double im = next();
  return cplx(re, im) * (1.0 / std::sqrt(2.0));
}

SpectralField random_field(int dim, std::int64_t J, const Grid1D& g, std::uint64_t seed,
                           double envelope_width) {
  SpectralField u(dim, J, g);
  GaussianStream rng(seed);
  const double w2 = 2.0 * envelope_width * envelope_width;
  for (std::size_t m = 0; m < u.n_modes(); ++m) {
    const double decay = 1.0 / (1.0 + static_cast<double>(u.modes()[m].norm_sq()));
    const cplx amp = decay * rng.next_complex();
    const int mod = static_cast<int>(rng.next_u64() % 9) - 4;
    const double k = static_cast<double>(mod) * kPi / g.L;
    // Random per-mode center; keeps the mass/momentum densities generic (a
    // common center makes every odd pairing functional vanish by parity).
    const double c =
        (static_cast<double>(rng.next_u64() >> 11) * 0x1p-53 - 0.5) * 0.5 * g.L;
    cplx* p = u.row(m).data();
    for (std::size_t i = 0; i < g.Nx; ++i) {
      const double x = g.x(i) - c;
      p[i] = amp * std::exp(-x * x / w2) * cplx(std::cos(k * g.x(i)), std::sin(k * g.x(i)));
    }
  }
  return u;
}

SpectralField random_constant_field(int dim, std::int64_t J, const Grid1D& g,
                                    std::uint64_t seed) {
  SpectralField u(dim, J, g);
  GaussianStream rng(seed);
  for (std::size_t m = 0; m < u.n_modes(); ++m) {
    const double decay = 1.0 / (1.0 + static_cast<double>(u.modes()[m].norm_sq()));
    const cplx amp = decay * rng.next_complex();
    for (auto& v : u.row(m)) v = amp;
  }
  return u;
}

SpectralField packet_field(int dim, std::int64_t J, const Grid1D& g,
                           const std::vector<GaussianPacket>& packets) {
  SpectralField u(dim, J, g);
  for (const auto& pk : packets) {
    if (pk.mode.sup_norm() > J) fail("packet_field: packet mode outside cutoff");
    cplx* p = u.row(pk.mode).data();
    const double w2 = 2.0 * pk.width * pk.width;
    for (std::size_t i = 0; i < g.Nx; ++i) {
      const double x = g.x(i) - pk.center;
      p[i] += pk.amplitude * std::exp(-x * x / w2) *
              cplx(std::cos(pk.velocity * g.x(i)), std::sin(pk.velocity * g.x(i)));
    }
  }
  return u;
}

SpectralField normalized_l2h1(SpectralField u, double target) {
  const double n = norm(u, NormSpec{2, 1.0});
  if (n > 0.0) u *= cplx(target / n, 0.0);
  return u;
}

}  // namespace rqnls
