#include "rqnls/dynamics.hpp"

#include <cmath>

#include "rqnls/fft.hpp"

namespace rqnls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

cplx phase(double a) { return cplx(std::cos(a), std::sin(a)); }

std::int64_t checked_steps(double T, double dt, const char* what) {
  if (!(dt > 0.0)) fail(std::string(what) + ": dt must be positive");
  if (!(T >= 0.0)) fail(std::string(what) + ": T must be nonnegative");
  const auto n = static_cast<std::int64_t>(std::llround(T / dt));
  if (std::fabs(static_cast<double>(n) * dt - T) > 1e-9 * std::max(1.0, T))
    fail(std::string(what) + ": dt must divide the time span");
  return n;
}
}  // namespace

SpectralField free_evolve(const SpectralField& u, double t) {
  SpectralField hat = fft_x(u);
  const std::size_t nx = u.grid().Nx;
  std::vector<cplx> mult(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double xi = u.grid().xi(i);
    mult[i] = phase(-t * xi * xi);
  }
  parallel_for(hat.n_modes(), [&](std::size_t m) {
    cplx* p = hat.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) p[i] *= mult[i];
  });
  return ifft_x(hat);
}

namespace {

// du/dt = -i F(u), classical 4-stage Runge-Kutta over one substep.
SpectralField rk4_nonlinear(const SpectralField& u, double dt, NonlinearityMethod method) {
  auto rhs = [method](const SpectralField& v) {
    SpectralField f = eval_F(v, method);
    f *= cplx(0.0, -1.0);
    return f;
  };
  const SpectralField k1 = rhs(u);
  SpectralField tmp = u;
  {
    SpectralField h = k1;
    h *= cplx(0.5 * dt, 0.0);
    tmp += h;
  }
  const SpectralField k2 = rhs(tmp);
  tmp = u;
  {
    SpectralField h = k2;
    h *= cplx(0.5 * dt, 0.0);
    tmp += h;
  }
  const SpectralField k3 = rhs(tmp);
  tmp = u;
  {
    SpectralField h = k3;
    h *= cplx(dt, 0.0);
    tmp += h;
  }
  const SpectralField k4 = rhs(tmp);

  SpectralField out = u;
  const std::size_t n = out.values().size();
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i)
    out.values()[i] += w * (k1.values()[i] + 2.0 * k2.values()[i] + 2.0 * k3.values()[i] +
                            k4.values()[i]);
  return out;
}

}  // namespace

SimState strang_step(const SimState& s, double dt, NonlinearityMethod method) {
  if (!(dt != 0.0)) fail("strang_step: dt must be nonzero");
  SimState out;
  out.field = free_evolve(s.field, 0.5 * dt);
  out.field = rk4_nonlinear(out.field, dt, method);
  out.field = free_evolve(out.field, 0.5 * dt);
  out.step = s.step + 1;
  out.t = s.t + dt;
  if (auto bad = detect_nonfinite(out.field))
    throw IntegrationError("nonfinite value after step " + std::to_string(out.step) +
                               " (mode offset " +
                               std::to_string(mode_offset(bad->first, out.field.cutoff())) +
                               ", x index " + std::to_string(bad->second) + ")",
                           out.step);
  return out;
}

Trajectory evolve(SimState s, double T, double dt, const EvolveOptions& opt) {
  Trajectory traj;
  const std::int64_t n_steps = checked_steps(T, dt, "evolve");
  std::int64_t per_tick = n_steps;
  if (opt.cadence > 0.0) {
    per_tick = checked_steps(opt.cadence, dt, "evolve cadence");
    if (per_tick == 0) per_tick = 1;
  }
  TrajectorySampler sampler(opt.beta, opt.with_brackets);

  auto tick = [&](const SimState& st) {
    DiagnosticsRecord rec = sampler.sample_resonant(st.field, st.t);
    traj.records.push_back(rec);
    if (opt.snapshot_hook) opt.snapshot_hook(st);
    if (rec.contamination > opt.contamination_threshold) {
      traj.contaminated = true;
      return opt.abort_on_contamination;
    }
    return false;
  };

  tick(s);
  try {
    for (std::int64_t k = 1; k <= n_steps; ++k) {
      s = strang_step(s, dt, opt.method);
      if (k % per_tick == 0 || k == n_steps)
        if (tick(s)) break;
    }
  } catch (const IntegrationError& e) {
    traj.aborted = true;
    traj.abort_step = e.step;
    traj.abort_message = e.what();
  }
  traj.final_state = std::move(s);
  return traj;
}

// ---- cylinder ---------------------------------------------------------------

CylinderField::CylinderField(Grid1D gx, std::size_t Ny) : gx_(gx), Ny_(Ny) {
  if (Ny == 0 || (Ny & (Ny - 1)) != 0) fail("CylinderField: Ny must be a power of two");
  v_.assign(gx_.Nx * Ny_, cplx{});
}

double CylinderField::y(std::size_t k) const {
  return 2.0 * kPi * static_cast<double>(k) / static_cast<double>(Ny_);
}

double CylinderField::mass() const {
  std::vector<double> sq(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) sq[i] = std::norm(v_[i]);
  const double dy = 2.0 * kPi / static_cast<double>(Ny_);
  return pairwise_sum(sq) * gx_.dx() * dy;
}

namespace {

// 2D unitary transform of the cylinder samples.
std::vector<cplx> cylinder_hat(const CylinderField& u) {
  std::vector<cplx> hat = u.values();
  const auto& plan =
      Fft::get({static_cast<int>(u.grid_x().Nx), static_cast<int>(u.Ny())});
  plan.forward(hat.data(), hat.data());
  const double s = 1.0 / std::sqrt(static_cast<double>(hat.size()));
  for (auto& v : hat) v *= s;
  return hat;
}

}  // namespace

double CylinderField::energy_kinetic() const {
  const auto hat = cylinder_hat(*this);
  const double dy = 2.0 * kPi / static_cast<double>(Ny_);
  std::vector<double> terms(hat.size());
  for (std::size_t ix = 0; ix < gx_.Nx; ++ix) {
    const double xi = gx_.xi(ix);
    for (std::size_t iy = 0; iy < Ny_; ++iy) {
      const double ky = static_cast<double>(freq_y(iy));
      terms[ix * Ny_ + iy] = (xi * xi + ky * ky) * std::norm(hat[ix * Ny_ + iy]);
    }
  }
  return 0.5 * pairwise_sum(terms) * gx_.dx() * dy;
}

double CylinderField::energy_potential() const {
  std::vector<double> terms(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const double a = std::norm(v_[i]);
    terms[i] = a * a * a;
  }
  const double dy = 2.0 * kPi / static_cast<double>(Ny_);
  return pairwise_sum(terms) * gx_.dx() * dy / 6.0;
}

std::array<double, 2> CylinderField::momentum() const {
  const auto hat = cylinder_hat(*this);
  const double dy = 2.0 * kPi / static_cast<double>(Ny_);
  std::vector<double> px(hat.size()), py(hat.size());
  for (std::size_t ix = 0; ix < gx_.Nx; ++ix) {
    const double xi = gx_.xi(ix);
    for (std::size_t iy = 0; iy < Ny_; ++iy) {
      const double a = std::norm(hat[ix * Ny_ + iy]);
      px[ix * Ny_ + iy] = xi * a;
      py[ix * Ny_ + iy] = static_cast<double>(freq_y(iy)) * a;
    }
  }
  const double sc = gx_.dx() * dy;
  return {pairwise_sum(px) * sc, pairwise_sum(py) * sc};
}

std::vector<double> CylinderField::mass_density_x() const {
  const double dy = 2.0 * kPi / static_cast<double>(Ny_);
  std::vector<double> rho(gx_.Nx, 0.0);
  for (std::size_t ix = 0; ix < gx_.Nx; ++ix) {
    double s = 0.0;
    for (std::size_t iy = 0; iy < Ny_; ++iy) s += std::norm(v_[ix * Ny_ + iy]);
    rho[ix] = s * dy;
  }
  return rho;
}

bool CylinderField::finite() const {
  for (const auto& v : v_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

CylinderField cylinder_free_evolve(const CylinderField& u, double t) {
  CylinderField out = u;
  const auto& plan =
      Fft::get({static_cast<int>(u.grid_x().Nx), static_cast<int>(u.Ny())});
  plan.forward(out.values().data(), out.values().data());
  const std::size_t ny = u.Ny();
  const double inv = 1.0 / static_cast<double>(out.values().size());
  for (std::size_t ix = 0; ix < u.grid_x().Nx; ++ix) {
    const double xi = u.grid_x().xi(ix);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double ky = static_cast<double>(u.freq_y(iy));
      out.values()[ix * ny + iy] *= phase(-t * (xi * xi + ky * ky)) * inv;
    }
  }
  plan.backward(out.values().data(), out.values().data());
  return out;
}

CylinderField cylinder_step(const CylinderField& u, double dt) {
  CylinderField out = cylinder_free_evolve(u, 0.5 * dt);
  for (auto& v : out.values()) {
    const double a2 = std::norm(v);
    v *= phase(-dt * a2 * a2);  // exact: |u| is conserved by the substep
  }
  out = cylinder_free_evolve(out, 0.5 * dt);
  return out;
}

CylinderTrajectory cylinder_evolve(CylinderField u, double T, double dt, double cadence,
                                   const std::function<void(const CylinderField&, double)>&
                                       snapshot_hook) {
  CylinderTrajectory traj;
  const std::int64_t n_steps = checked_steps(T, dt, "cylinder_evolve");
  std::int64_t per_tick = n_steps;
  if (cadence > 0.0) {
    per_tick = checked_steps(cadence, dt, "cylinder_evolve cadence");
    if (per_tick == 0) per_tick = 1;
  }
  TrajectorySampler sampler;
  double t = 0.0;
  traj.records.push_back(sampler.sample_cylinder(u, t));
  if (snapshot_hook) snapshot_hook(u, t);
  try {
    for (std::int64_t k = 1; k <= n_steps; ++k) {
      u = cylinder_step(u, dt);
      t = static_cast<double>(k) * dt;
      if (!u.finite())
        throw IntegrationError("nonfinite cylinder value after step " + std::to_string(k), k);
      if (k % per_tick == 0 || k == n_steps) {
        traj.records.push_back(sampler.sample_cylinder(u, t));
        if (snapshot_hook) snapshot_hook(u, t);
      }
    }
  } catch (const IntegrationError& e) {
    traj.aborted = true;
    traj.abort_step = e.step;
    traj.abort_message = e.what();
  }
  // Centered finite-difference rate along the sampled I(t) column.
  auto& recs = traj.records;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    if (i == 0) continue;
    const double dtc = recs[i + 1].t - recs[i - 1].t;
    if (dtc > 0.0) recs[i].virial_rate = (recs[i + 1].virial - recs[i - 1].virial) / dtc;
  }
  traj.final_field = std::move(u);
  traj.final_t = t;
  return traj;
}

// ---- symmetry ---------------------------------------------------------------

namespace {

int pow2_exponent(double lambda) {
  if (!(lambda > 0.0)) fail("SymmetryElement: lambda must be positive");
  int e = 0;
  const double m = std::frexp(lambda, &e);
  if (m != 0.5) fail("SymmetryElement: lambda must be a power of two (got " +
                     std::to_string(lambda) + ")");
  return e - 1;
}

}  // namespace

SpectralField apply_symmetry(const SpectralField& u, const SymmetryElement& g) {
  const int m = pow2_exponent(g.lambda);
  const Grid1D& gin = u.grid();
  std::size_t nx_out;
  if (m >= 0) {
    nx_out = gin.Nx << m;
  } else {
    if (gin.Nx >> (-m) < 4) fail("apply_symmetry: lambda would shrink the grid below 4 points");
    nx_out = gin.Nx >> (-m);
  }
  const Grid1D gout(gin.L * g.lambda, nx_out);
  // Boost must land on the output frequency lattice.
  const double braw = g.xi0 * gout.L / kPi;
  const auto b = static_cast<std::int64_t>(std::llround(braw));
  if (std::fabs(braw - static_cast<double>(b)) > 1e-9)
    fail("apply_symmetry: xi0 must be an integer multiple of pi/(lambda L)");

  const SpectralField hat = fft_x(u);
  SpectralField out_hat(u.dim(), u.cutoff(), gout);
  const auto half_out = static_cast<std::int64_t>(nx_out / 2);
  parallel_for(u.n_modes(), [&](std::size_t mm) {
    const cplx* src = hat.row(mm).data();
    cplx* dst = out_hat.row(mm).data();
    for (std::size_t i = 0; i < gin.Nx; ++i) {
      const std::int64_t k = gin.freq_index(i);
      if (m < 0 && (k < -half_out || k >= half_out)) continue;  // coarsened away
      std::int64_t kd = k + b;
      if (kd < -half_out || kd >= half_out) {
        // Wrap onto the representable band (discrete boost is modular).
        kd = ((kd + half_out) % static_cast<std::int64_t>(nx_out) +
              static_cast<std::int64_t>(nx_out)) %
                 static_cast<std::int64_t>(nx_out) -
             half_out;
      }
      const std::size_t id =
          kd >= 0 ? static_cast<std::size_t>(kd)
                  : static_cast<std::size_t>(kd + static_cast<std::int64_t>(nx_out));
      const double xik_out = kPi * static_cast<double>(k) / gout.L;
      const cplx ph = phase(-xik_out * g.x0) * ((b & 1) ? -1.0 : 1.0);
      dst[id] += ph * src[i];
    }
  });
  return ifft_x(out_hat);
}

SpectralField galilean_image(const SpectralField& u_at_t, double t, double xi0) {
  SpectralField v = apply_symmetry(u_at_t, SymmetryElement{2.0 * xi0 * t, xi0, 1.0});
  v *= phase(-t * xi0 * xi0);
  return v;
}

double cylinder_l2h1_norm(const CylinderField& a) {
  const std::size_t nx = a.grid_x().Nx, ny = a.Ny();
  const auto& plan = Fft::get({static_cast<int>(ny)});
  const double dy = 2.0 * kPi / static_cast<double>(ny);
  std::vector<double> per_x(nx, 0.0);
  parallel_for_chunks(nx, [&](std::size_t bx, std::size_t ex) {
    std::vector<cplx> row(ny);
    for (std::size_t ix = bx; ix < ex; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) row[iy] = a.at(ix, iy);
      plan.forward(row.data(), row.data());
      double s = 0.0;
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double k = static_cast<double>(a.freq_y(iy));
        s += (1.0 + k * k) * std::norm(row[iy]) / static_cast<double>(ny);
      }
      per_x[ix] = s * dy;
    }
  });
  return std::sqrt(pairwise_sum(per_x) * a.grid_x().dx());
}

double cylinder_l2h1_distance(const CylinderField& a, const CylinderField& b) {
  if (a.grid_x() != b.grid_x() || a.Ny() != b.Ny())
    fail("cylinder_l2h1_distance: shape mismatch");
  CylinderField d = a;
  for (std::size_t i = 0; i < d.values().size(); ++i) d.values()[i] -= b.values()[i];
  return cylinder_l2h1_norm(d);
}

}  // namespace rqnls
