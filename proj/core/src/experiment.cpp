#include <cmath>

#include "rqnls/dynamics.hpp"
#include "rqnls/fft.hpp"

namespace rqnls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

cplx phase(double a) { return cplx(std::cos(a), std::sin(a)); }

// Evaluate each mode profile of v at the lambda-refined, shifted points
// (-L + i dx/lambda) - shift/lambda for i = 0..lambda*Nx-1, by zero-padding
// the x-spectrum. Exact for grid-resolved profiles.
std::vector<std::vector<cplx>> upsample_shift(const SpectralField& v, std::int64_t lambda,
                                              double shift) {
  const Grid1D& g = v.grid();
  const std::size_t nx = g.Nx;
  const std::size_t nx_out = nx * static_cast<std::size_t>(lambda);
  const SpectralField hat = fft_x(v);
  const auto& plan = Fft::get({static_cast<int>(nx_out)});
  const double scale = std::sqrt(static_cast<double>(lambda)) /
                       std::sqrt(static_cast<double>(nx_out));
  std::vector<std::vector<cplx>> rows(v.n_modes());
  for (std::size_t m = 0; m < v.n_modes(); ++m) {
    std::vector<cplx> padded(nx_out, cplx{});
    const cplx* src = hat.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) {
      const std::int64_t k = g.freq_index(i);
      const std::size_t id = k >= 0 ? static_cast<std::size_t>(k)
                                    : nx_out - static_cast<std::size_t>(-k);
      padded[id] = src[i] * phase(-g.xi(i) * shift / static_cast<double>(lambda));
    }
    plan.backward(padded.data(), padded.data());
    for (auto& c : padded) c *= scale;
    rows[m] = std::move(padded);
  }
  return rows;
}

// Assemble sum_j row_j(x) e^{i j y} into a cylinder field (dim-1 mode set).
CylinderField assemble_cylinder(const std::vector<std::vector<cplx>>& rows,
                                const std::vector<ModeIndex>& modes, const Grid1D& gx,
                                std::size_t Ny) {
  CylinderField u(gx, Ny);
  std::vector<std::vector<cplx>> yphase(modes.size(), std::vector<cplx>(Ny));
  for (std::size_t m = 0; m < modes.size(); ++m)
    for (std::size_t iy = 0; iy < Ny; ++iy)
      yphase[m][iy] = phase(static_cast<double>(modes[m].c[0]) * u.y(iy));
  parallel_for_chunks(gx.Nx, [&](std::size_t bx, std::size_t ex) {
    for (std::size_t ix = bx; ix < ex; ++ix)
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const cplx a = rows[m][ix];
        for (std::size_t iy = 0; iy < Ny; ++iy) u.at(ix, iy) += a * yphase[m][iy];
      }
  });
  return u;
}

}  // namespace

std::vector<ApproxRow> approximation_experiment(const SpectralField& phi,
                                                const ApproxConfig& cfg) {
  if (phi.dim() != 1) fail("approximation_experiment: phi must carry a dim-1 mode set");
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
    fail("approximation_experiment: theta must lie in (0,1)");
  const double phi_h1 = norm(phi, NormSpec{2, 1.0});
  std::vector<ApproxRow> rows;

  for (double lambda_d : cfg.lambdas) {
    int e = 0;
    if (std::frexp(lambda_d, &e) != 0.5 || lambda_d < 2.0)
      fail("approximation_experiment: lambda must be a power of two >= 2");
    const auto lambda = static_cast<std::int64_t>(lambda_d);
    ApproxRow row;
    row.lambda = lambda_d;

    // Initial cylinder data: low-pass, free evolve by tn, then rescale/boost.
    const double cutoff = std::pow(lambda_d, cfg.theta);
    const SpectralField phi_low = project_low(phi, cutoff);
    row.projection_error = phi_h1 > 0.0 ? norm(phi - phi_low, NormSpec{2, 1.0}) / phi_h1 : 0.0;
    const SpectralField phi_data = free_evolve(phi_low, cfg.tn);
    const SpectralField scaled =
        apply_symmetry(phi_data, SymmetryElement{cfg.x0, cfg.xi0, lambda_d});
    std::vector<std::vector<cplx>> init_rows(scaled.n_modes());
    for (std::size_t m = 0; m < scaled.n_modes(); ++m) {
      auto r = scaled.row(m);
      init_rows[m].assign(r.begin(), r.end());
    }
    CylinderField u_n =
        assemble_cylinder(init_rows, scaled.modes(), scaled.grid(), cfg.Ny);
    const double u0_norm = cylinder_l2h1_norm(u_n);
    if (u0_norm == 0.0) {
      rows.push_back(row);
      continue;
    }

    // Resonant companion: data matched at tau = tn (free-evolved for the
    // finite-tn surrogate of the scattering branch).
    SimState v;
    v.field = cfg.tn == 0.0 ? phi : free_evolve(phi, cfg.tn);
    v.t = cfg.tn;

    const double sample_dt = cfg.T / cfg.n_samples;
    const double tau_step = sample_dt / (lambda_d * lambda_d);
    const auto v_substeps =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(tau_step / cfg.v_dt_max)));
    const double v_dt = tau_step / static_cast<double>(v_substeps);

    auto companion = [&](double t) {
      // w(t,x,y) = e^{-i(t-tn) xi0^2} e^{i x xi0}
      //            sum_j lambda^{-1/2} e^{-i t j^2} e^{i j y}
      //                  v_j(t/lambda^2 + tn, (x - x0 - 2 xi0 (t-tn))/lambda)
      const double shift = cfg.x0 + 2.0 * cfg.xi0 * (t - cfg.tn);
      auto mode_rows = upsample_shift(v.field, lambda, shift);
      const double lam_inv_sqrt = 1.0 / std::sqrt(lambda_d);
      for (std::size_t m = 0; m < mode_rows.size(); ++m) {
        const double jsq = static_cast<double>(v.field.modes()[m].norm_sq());
        const cplx f = lam_inv_sqrt * phase(-t * jsq);
        for (auto& c : mode_rows[m]) c *= f;
      }
      CylinderField w = assemble_cylinder(mode_rows, v.field.modes(),
                                          Grid1D(phi.grid().L * lambda_d,
                                                 phi.grid().Nx * static_cast<std::size_t>(lambda)),
                                          cfg.Ny);
      const cplx tphase = phase(-(t - cfg.tn) * cfg.xi0 * cfg.xi0);
      for (std::size_t ix = 0; ix < w.grid_x().Nx; ++ix) {
        const cplx f = tphase * phase(cfg.xi0 * w.grid_x().x(ix));
        for (std::size_t iy = 0; iy < w.Ny(); ++iy) w.at(ix, iy) *= f;
      }
      return w;
    };

    {
      const CylinderField w0 = companion(0.0);
      row.initial_gap = cylinder_l2h1_distance(u_n, w0) / u0_norm;
      row.sup_rel_error = row.initial_gap;
      row.t_at_sup = 0.0;
    }
    const auto cyl_steps =
        static_cast<std::int64_t>(std::llround(sample_dt / cfg.dt));
    if (cyl_steps <= 0 || std::fabs(static_cast<double>(cyl_steps) * cfg.dt - sample_dt) > 1e-9)
      fail("approximation_experiment: dt must divide T / n_samples");
    double t = 0.0;
    for (int sample = 1; sample <= cfg.n_samples; ++sample) {
      for (std::int64_t k = 0; k < cyl_steps; ++k) u_n = cylinder_step(u_n, cfg.dt);
      for (std::int64_t k = 0; k < v_substeps; ++k) v = strang_step(v, v_dt, cfg.method);
      t = static_cast<double>(sample) * sample_dt;
      const CylinderField w = companion(t);
      const double err = cylinder_l2h1_distance(u_n, w) / u0_norm;
      if (err > row.sup_rel_error) {
        row.sup_rel_error = err;
        row.t_at_sup = t;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rqnls
