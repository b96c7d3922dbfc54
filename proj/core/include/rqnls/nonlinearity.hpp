#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rqnls/grid.hpp"
#include "rqnls/resonance.hpp"

namespace rqnls {

enum class NonlinearityMethod { DirectEnumeration, FftLift, Auto };

// Shared immutable resonance tables, built once per (dim, J).
const ResonanceTable& shared_table(int dim, std::int64_t J);

// Dealiased sizes of the auxiliary torus lift
//   W(y, s) = sum_j u_j e^{i (j.y + |j|^2 s)}
// at one spatial point. Quintic products carry y-frequencies in [-5J, 5J]
// per axis and s-frequencies in [-2Q, 3Q] with Q = max_j |j|^2, so grids of
// at least 10J+2 and 5Q+2 points keep every product coefficient alias-free
// (see docs/dealiasing.md); sizes are rounded up to fast FFT lengths.
struct LiftSpec {
  int dim = 1;
  std::int64_t J = 0;
  int Ny = 0;  // per mode-lattice axis
  int Ns = 0;

  static LiftSpec for_field(int dim, std::int64_t J);
  std::size_t points() const {
    std::size_t p = static_cast<std::size_t>(Ns);
    for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(Ny);
    return p;
  }
  std::vector<int> fft_dims() const;
  // Flat buffer index of the (j, |j|^2) bin.
  std::size_t bin(const ModeIndex& j) const;
};

// F_j(u) = sum over R(j) of u_{j1} conj(u_{j2}) u_{j3} conj(u_{j4}) u_{j5},
// direct summation in canonical tuple order. Requires table.dim == u.dim and
// table.cutoff >= u.cutoff.
SpectralField eval_F_direct(const SpectralField& u, const ResonanceTable& table);

// Same F via the lift: F_j(u)(x) is the (j, |j|^2) Fourier coefficient of
// |W|^4 W. Agrees with the direct route to ~1e-13; the contract is 1e-10.
SpectralField eval_F_fft(const SpectralField& u);

// Dispatch on method; Auto picks the cheaper evaluator from a deterministic
// cost model (never from wall-clock measurements, so runs stay reproducible).
SpectralField eval_F(const SpectralField& u, NonlinearityMethod method);
NonlinearityMethod resolve_auto(int dim, std::int64_t J, std::size_t Nx);

// Sextic interaction density D(x) = sum_j conj(u_j) F_j(u)(x), evaluated as
// the grid mean of |W|^6 over the lift torus. Real and nonnegative up to
// roundoff by the resonant positivity identity.
std::vector<double> sextic_density(const SpectralField& u);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double sextic = 0.0;
  double total = 0.0;
};

// E = integral of (1/2) sum_j |du_j/dx|^2 + (1/6) D(x) dx.
EnergyBreakdown resonant_energy(const SpectralField& u);

// The sextic part written through the cubic double-index coefficients
//   c_{j,n}(x) = sum over j1-j2+j3=j, |j1|^2-|j2|^2+|j3|^2=n of u_j1 conj(u_j2) u_j3:
// (1/6) integral sum_{j,n} |c_{j,n}(x)|^2 dx. Equals the sextic part of
// resonant_energy analytically; kept as an independent route for tests.
double sextic_energy_pair_form(const SpectralField& u);

// M_{a,b,c} = sum_j (a + b.j + c|j|^2) ||u_j||_{L^2}^2. b has one meaningful
// component per lattice dimension.
double mass_family(const SpectralField& u, double a, std::array<double, 2> b, double c);

struct BracketResiduals {
  double mass = 0.0;      // max_x |sum_j Im(conj(u_j) F_j)| / max_x D
  double momentum = 0.0;  // rel. L^2 gap of sum_j {F_j,u_j}_p vs -(2/3) d/dx D
};

// Both brackets evaluated with spectral derivatives; (0,0) for a zero field.
BracketResiduals bracket_residuals(const SpectralField& u);

}  // namespace rqnls
