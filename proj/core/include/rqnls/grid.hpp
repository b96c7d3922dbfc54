#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rqnls/modes.hpp"
#include "rqnls/util.hpp"

namespace rqnls {

// Periodized line: x in [-L, L), Nx equispaced points (power of two),
// frequencies xi_k = pi k / L for k in [-Nx/2, Nx/2).
struct Grid1D {
  double L = 0.0;
  std::size_t Nx = 0;

  Grid1D() = default;
  Grid1D(double half_width, std::size_t points);

  double dx() const { return 2.0 * L / static_cast<double>(Nx); }
  double x(std::size_t i) const { return -L + static_cast<double>(i) * dx(); }
  // Signed frequency index for storage slot i (DFT wraparound order).
  std::int64_t freq_index(std::size_t i) const {
    return i < Nx / 2 ? static_cast<std::int64_t>(i)
                      : static_cast<std::int64_t>(i) - static_cast<std::int64_t>(Nx);
  }
  double xi(std::size_t i) const;
  double xi_nyquist() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

// The unknown: one complex profile u_j(x) per lattice mode j, |j|_inf <= J,
// modes in canonical lexicographic order, samples mode-major. Plain value
// type; all operations below return new fields.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int dim, std::int64_t J, Grid1D grid);

  int dim() const { return dim_; }
  std::int64_t cutoff() const { return J_; }
  const Grid1D& grid() const { return grid_; }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  std::size_t n_modes() const { return modes_.size(); }

  std::span<cplx> row(std::size_t m) { return {v_.data() + m * grid_.Nx, grid_.Nx}; }
  std::span<const cplx> row(std::size_t m) const {
    return {v_.data() + m * grid_.Nx, grid_.Nx};
  }
  std::span<cplx> row(const ModeIndex& j) { return row(mode_offset(j, J_)); }
  std::span<const cplx> row(const ModeIndex& j) const { return row(mode_offset(j, J_)); }

  cplx& at(std::size_t m, std::size_t i) { return v_[m * grid_.Nx + i]; }
  const cplx& at(std::size_t m, std::size_t i) const { return v_[m * grid_.Nx + i]; }

  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

 private:
  int dim_ = 1;
  std::int64_t J_ = 0;
  Grid1D grid_;
  std::vector<ModeIndex> modes_;
  std::vector<cplx> v_;
};

struct NormSpec {
  int p = 2;       // spatial exponent, one of 2, 6, or max (p_infinity)
  double s = 0.0;  // mode regularity: weight <j>^s
  static constexpr int p_infinity = -1;
};

// Unitary transform along x, every mode row: constant c maps to a spike of
// height c*sqrt(Nx) at xi = 0. ifft_x inverts it exactly.
SpectralField fft_x(const SpectralField& f);
SpectralField ifft_x(const SpectralField& f);

// ( integral ( sum_j <j>^{2s} |u_j(x)|^2 )^{p/2} dx )^{1/p}; the x integral
// is the periodic Riemann sum and p = infinity takes the sup over points.
double norm(const SpectralField& f, const NormSpec& n);

// L^2_x norm of a single row (Riemann sum).
double row_l2(const Grid1D& g, std::span<const cplx> row);

// The fixed low-pass symbol: 1 on |r|<=1, 0 on |r|>=2, and
// exp(1 - 1/(1-(|r|-1)^2)) in between. Pinned exactly so filtered output is
// reproducible bit-for-bit at matching precision.
double lowpass_bump(double r);

// Smooth frequency cutoff: multiplies each x-Fourier coefficient by
// lowpass_bump(xi/N). Not idempotent, but nests: applying the N cutoff after
// the N/2 cutoff reproduces the N/2 result exactly. Rejects N <= 0.
SpectralField project_low(const SpectralField& f, double N);

// First x-derivative, spectral (exact for grid-resolved fields).
SpectralField derivative_x(const SpectralField& f);

// Exact translation u(x) -> u(x - shift) via Fourier phases.
SpectralField translate_x(const SpectralField& f, double shift);

// First NaN/Inf location as (mode, x index), if any.
std::optional<std::pair<ModeIndex, std::size_t>> detect_nonfinite(const SpectralField& f);

// Fraction of squared L^2 mass outside |x| <= L/2; the periodization health
// indicator for scattering-type runs.
double outer_mass_fraction(const SpectralField& f);

}  // namespace rqnls
