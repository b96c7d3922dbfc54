#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rqnls/grid.hpp"

namespace rqnls {

class CylinderField;  // dynamics module

// Odd pairing kernel for the interaction functional. Sign is the production
// choice a(r) = r/|r| with a(0) = 0 (the continuum kernel never carries mass
// on the diagonal; the grid convention is pinned here).
enum class MorawetzWeight { Sign };

// M = sum_{j,j'} integral a(x-y) |u_j(y)|^2 Im(conj(u_{j'}) dx u_{j'})(x) dy dx,
// computed in O(Nx) from prefix sums of the mass density against the
// momentum density. Half-cell convention: the diagonal cell contributes with
// weight zero (half below, half above).
double morawetz_action(const SpectralField& u, MorawetzWeight w = MorawetzWeight::Sign);

// Same action on low-passed fields: mass factor through the C*K cutoff,
// momentum factor through the K cutoff.
double frequency_localized_morawetz(const SpectralField& u, double K, double C = 1.0);

// 2 ||u||^3_{L^2 l^2} ||dx u||_{L^2 l^2}; numerical ceiling for |M|.
double morawetz_bound(const SpectralField& u);

// I = iint_{x > xt} (x - xt) rho(x) rho(xt) dx dxt with
// rho(x) = integral over the torus of |u(x,y)|^2 dy; two prefix-sum passes.
double bilinear_virial(const CylinderField& u);

// ||exp(-i t2 laplacian) u2 - exp(-i t1 laplacian) u1||_{L^2 h^1}: the
// free-evolution pullback gap between two trajectory snapshots. Decays for
// scattering solutions as t1 grows.
double scattering_cauchy_defect(const SpectralField& u1, double t1,
                                const SpectralField& u2, double t2);

// One time sample of everything monitored along a trajectory. CSV columns
// are emitted in exactly this field order.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass_100 = 0.0;  // M_{1,0,0}
  double mass_010 = 0.0;  // M_{0,1,0}
  double mass_001 = 0.0;  // M_{0,0,1}
  double energy_kinetic = 0.0;
  double energy_sextic = 0.0;
  double energy_total = 0.0;
  double norm_l2 = 0.0;        // s = 0
  double norm_l2_hbeta = 0.0;  // s = beta
  double norm_l2_h1 = 0.0;     // s = 1
  double l6_hbeta_accum = 0.0;
  double l6_h1_accum = 0.0;
  double morawetz = 0.0;
  double morawetz_ceiling = 0.0;
  double virial = 0.0;          // cylinder runs only
  double virial_rate = 0.0;     // centered finite difference of I(t)
  double bracket_mass = 0.0;    // resonant runs only
  double bracket_momentum = 0.0;
  double cauchy_defect = 0.0;  // vs previous record's pullback
  double contamination = 0.0;  // mass fraction outside |x| <= L/2

  static const std::vector<std::string>& csv_columns();
  std::string csv_row() const;
};

// Stateful per-trajectory sampler: owns the L^6_t accumulators, the previous
// pullback snapshot, and the previous virial value.
class TrajectorySampler {
 public:
  explicit TrajectorySampler(double beta = 0.5, bool with_brackets = true);

  DiagnosticsRecord sample_resonant(const SpectralField& u, double t);
  DiagnosticsRecord sample_cylinder(const CylinderField& u, double t);

  double beta() const { return beta_; }

 private:
  double beta_;
  bool with_brackets_;
  bool have_prev_ = false;
  double prev_t_ = 0.0;
  double l6b_pow_prev_ = 0.0, l61_pow_prev_ = 0.0;
  double l6b_int_ = 0.0, l61_int_ = 0.0;
  std::optional<SpectralField> prev_pullback_;
  bool have_virial_prev_ = false;
  double virial_prev_ = 0.0, virial_prev_t_ = 0.0;
};

void write_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);

}  // namespace rqnls
