#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rqnls/diagnostics.hpp"
#include "rqnls/grid.hpp"
#include "rqnls/nonlinearity.hpp"

namespace rqnls {

// e^{it laplacian}: each mode's x-spectrum multiplied by e^{-i t xi^2}.
// Exactly unitary per mode.
SpectralField free_evolve(const SpectralField& u, double t);

struct SimState {
  SpectralField field;
  double t = 0.0;
  std::int64_t step = 0;
};

struct IntegrationError : std::runtime_error {
  IntegrationError(const std::string& msg, std::int64_t at_step)
      : std::runtime_error(msg), step(at_step) {}
  std::int64_t step;
};

// One Strang step for i du_j/dt + laplacian u_j = F_j(u): half free step,
// RK4 on du/dt = -i F(u) over dt, half free step. Throws IntegrationError
// on nonfinite output.
SimState strang_step(const SimState& s, double dt, NonlinearityMethod method);

struct EvolveOptions {
  double cadence = 0.0;  // diagnostics interval; 0 means only t=0 and t=T
  NonlinearityMethod method = NonlinearityMethod::Auto;
  double beta = 0.5;
  bool with_brackets = true;
  bool abort_on_contamination = false;
  double contamination_threshold = 1e-6;
  // Called on every diagnostics tick with the current state.
  std::function<void(const SimState&)> snapshot_hook;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  SimState final_state;
  bool contaminated = false;
  bool aborted = false;  // nonfinite state; records up to the abort are kept
  std::int64_t abort_step = -1;
  std::string abort_message;
};

// Fixed-step integration to T with diagnostics sampling. dt must divide the
// cadence. Records are also flushed for aborted runs (the IntegrationError
// carries the step index; the caller keeps the records emitted so far via
// the snapshot hook).
Trajectory evolve(SimState s, double T, double dt, const EvolveOptions& opt = {});

// u(x, y) on [-L, L) x [0, 2 pi), row-major with y fastest.
class CylinderField {
 public:
  CylinderField() = default;
  CylinderField(Grid1D gx, std::size_t Ny);

  const Grid1D& grid_x() const { return gx_; }
  std::size_t Ny() const { return Ny_; }
  double y(std::size_t k) const;
  // Signed y-frequency for storage slot k.
  std::int64_t freq_y(std::size_t k) const {
    return k < Ny_ / 2 ? static_cast<std::int64_t>(k)
                       : static_cast<std::int64_t>(k) - static_cast<std::int64_t>(Ny_);
  }

  cplx& at(std::size_t ix, std::size_t iy) { return v_[ix * Ny_ + iy]; }
  const cplx& at(std::size_t ix, std::size_t iy) const { return v_[ix * Ny_ + iy]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  double mass() const;                  // integral |u|^2
  double energy_kinetic() const;        // integral (1/2) |grad u|^2
  double energy_potential() const;      // integral (1/6) |u|^6
  std::array<double, 2> momentum() const;  // Im integral conj(u) grad u
  // integral over y: rho(x) = int |u(x,y)|^2 dy.
  std::vector<double> mass_density_x() const;
  bool finite() const;

  friend bool operator==(const CylinderField&, const CylinderField&) = default;

 private:
  Grid1D gx_;
  std::size_t Ny_ = 0;
  std::vector<cplx> v_;
};

// Strang step for i du/dt + laplacian u = |u|^4 u on the cylinder: the free
// step is the exact 2D multiplier, the nonlinear step is the exact pointwise
// phase flow u -> u e^{-i dt |u|^4}.
CylinderField cylinder_step(const CylinderField& u, double dt);
CylinderField cylinder_free_evolve(const CylinderField& u, double t);

struct CylinderTrajectory {
  std::vector<DiagnosticsRecord> records;
  CylinderField final_field;
  double final_t = 0.0;
  bool aborted = false;
  std::int64_t abort_step = -1;
  std::string abort_message;
};

CylinderTrajectory cylinder_evolve(CylinderField u, double T, double dt, double cadence,
                                   const std::function<void(const CylinderField&, double)>&
                                       snapshot_hook = nullptr);

// Scale lambda = 2^m (m may be negative), translation x0, boost xi0. The
// boost must be an integer multiple of the output grid's frequency quantum
// pi / (lambda L).
struct SymmetryElement {
  double x0 = 0.0;
  double xi0 = 0.0;
  double lambda = 1.0;
};

// (g u)_j(x) = lambda^{-1/2} e^{i x xi0} u_j((x - x0)/lambda) on the scaled
// grid (lambda L, lambda Nx). Exact in Fourier space; preserves all
// L^2_x h^s norms.
SpectralField apply_symmetry(const SpectralField& u, const SymmetryElement& g);

// The transform carrying a solution to its boosted companion:
// u(t,x) -> e^{i x xi0 - i t xi0^2} u(t, x - 2 xi0 t).
SpectralField galilean_image(const SpectralField& u_at_t, double t, double xi0);

// ---- large-scale approximation experiment ----------------------------------

struct ApproxConfig {
  std::vector<double> lambdas;  // powers of two
  double theta = 0.5;           // low-pass exponent in (0,1)
  double xi0 = 0.0;
  double x0 = 0.0;
  double tn = 0.0;
  std::size_t Ny = 64;          // cylinder y points
  double T = 1.0;               // cylinder window
  double dt = 1e-3;             // cylinder step
  int n_samples = 20;           // error samples over the window
  double v_dt_max = 1e-3;       // resonant-system step bound (tau timescale)
  NonlinearityMethod method = NonlinearityMethod::Auto;
};

struct ApproxRow {
  double lambda = 0.0;
  double sup_rel_error = 0.0;    // sup_t ||u_n - w_n|| / ||u_n(0)||, L^2_x H^1_y
  double t_at_sup = 0.0;
  double projection_error = 0.0;  // ||phi - P_{<= lambda^theta} phi|| / ||phi||
  double initial_gap = 0.0;       // ||u_n(0) - w_n(0)|| / ||u_n(0)||
};

// For each lambda: build u_n(0) on the cylinder from phi by low-pass, free
// evolution and the symmetry map; solve the resonant system from phi;
// assemble the modulated rescaled companion w_n and report the in-window
// sup of the relative gap.
std::vector<ApproxRow> approximation_experiment(const SpectralField& phi,
                                                const ApproxConfig& cfg);

// L^2_x H^1_y distance between two cylinder fields.
double cylinder_l2h1_distance(const CylinderField& a, const CylinderField& b);
double cylinder_l2h1_norm(const CylinderField& a);

}  // namespace rqnls
