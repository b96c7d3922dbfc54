#include "rqnls/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rqnls/dynamics.hpp"
#include "rqnls/faults.hpp"
#include "rqnls/fft.hpp"
#include "rqnls/nonlinearity.hpp"

namespace rqnls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// Core prefix-sum pairing: sum_{i} B_i (sum_{l<i} A_l - sum_{l>i} A_l) dx^2
// for the odd sign kernel; the diagonal carries weight zero. The parity
// mutation replaces the kernel by the even |sign| variant.
double paired_action(const std::vector<double>& A, const std::vector<double>& B, double dx) {
  const std::size_t n = A.size();
  const bool even_kernel = faults::active() == faults::Mutation::MorawetzKernelParity;
  std::vector<double> tot_terms(A.begin(), A.end());
  const double tot = pairwise_sum(tot_terms);
  std::vector<double> terms(n);
  double cum = 0.0;  // sum_{l<i} A_l
  for (std::size_t i = 0; i < n; ++i) {
    const double w = even_kernel ? (tot - A[i]) : (2.0 * cum + A[i] - tot);
    terms[i] = B[i] * w;
    cum += A[i];
  }
  return pairwise_sum(terms) * dx * dx;
}

void densities(const SpectralField& u, std::vector<double>& A, std::vector<double>& B) {
  const std::size_t nx = u.grid().Nx;
  A.assign(nx, 0.0);
  B.assign(nx, 0.0);
  const SpectralField du = derivative_x(u);
  for (std::size_t m = 0; m < u.n_modes(); ++m) {
    const cplx* up = u.row(m).data();
    const cplx* dp = du.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) {
      A[i] += std::norm(up[i]);
      B[i] += (std::conj(up[i]) * dp[i]).imag();
    }
  }
}

}  // namespace

double morawetz_action(const SpectralField& u, MorawetzWeight) {
  std::vector<double> A, B;
  densities(u, A, B);
  return paired_action(A, B, u.grid().dx());
}

double frequency_localized_morawetz(const SpectralField& u, double K, double C) {
  if (!(K > 0.0)) fail("frequency_localized_morawetz: K must be positive");
  const SpectralField mass_part = project_low(u, C * K);
  const SpectralField mom_part = project_low(u, K);
  std::vector<double> A, Bdummy, Adummy, B;
  densities(mass_part, A, Bdummy);
  densities(mom_part, Adummy, B);
  return paired_action(A, B, u.grid().dx());
}

double morawetz_bound(const SpectralField& u) {
  const double l2 = norm(u, NormSpec{2, 0.0});
  const double dl2 = norm(derivative_x(u), NormSpec{2, 0.0});
  return 2.0 * l2 * l2 * l2 * dl2;
}

double bilinear_virial(const CylinderField& u) {
  // I = sum_{x > xt} (x - xt) rho(x) rho(xt) dx dxt
  //   = sum_x rho(x) [ x * cum0(x) - cum1(x) ] dx dxt
  // with cum0/cum1 the prefix mass and first-moment sums below x.
  const auto rho = u.mass_density_x();
  const double dx = u.grid_x().dx();
  const std::size_t n = rho.size();
  std::vector<double> terms(n);
  double cum0 = 0.0, cum1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u.grid_x().x(i);
    terms[i] = rho[i] * (x * cum0 - cum1);
    cum0 += rho[i];
    cum1 += rho[i] * x;
  }
  return pairwise_sum(terms) * dx * dx;
}

double scattering_cauchy_defect(const SpectralField& u1, double t1, const SpectralField& u2,
                                double t2) {
  const SpectralField p1 = free_evolve(u1, -t1);
  const SpectralField p2 = free_evolve(u2, -t2);
  return norm(p2 - p1, NormSpec{2, 1.0});
}

const std::vector<std::string>& DiagnosticsRecord::csv_columns() {
  static const std::vector<std::string> cols = {
      "t",           "mass_100",       "mass_010",       "mass_001",
      "energy_kin",  "energy_sextic",  "energy_total",   "norm_l2",
      "norm_l2_hbeta", "norm_l2_h1",   "l6_hbeta_accum", "l6_h1_accum",
      "morawetz",    "morawetz_ceiling", "virial",       "virial_rate",
      "bracket_mass", "bracket_momentum", "cauchy_defect", "contamination"};
  return cols;
}

std::string DiagnosticsRecord::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  const double* vals[] = {&t,           &mass_100,       &mass_010,        &mass_001,
                          &energy_kinetic, &energy_sextic, &energy_total,  &norm_l2,
                          &norm_l2_hbeta, &norm_l2_h1,    &l6_hbeta_accum, &l6_h1_accum,
                          &morawetz,    &morawetz_ceiling, &virial,        &virial_rate,
                          &bracket_mass, &bracket_momentum, &cauchy_defect, &contamination};
  bool first = true;
  for (const double* v : vals) {
    if (!first) os << ',';
    os << *v;
    first = false;
  }
  return os.str();
}

TrajectorySampler::TrajectorySampler(double beta, bool with_brackets)
    : beta_(beta), with_brackets_(with_brackets) {}

DiagnosticsRecord TrajectorySampler::sample_resonant(const SpectralField& u, double t) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass_100 = mass_family(u, 1.0, {0.0, 0.0}, 0.0);
  r.mass_010 = mass_family(u, 0.0, {1.0, 0.0}, 0.0);
  r.mass_001 = mass_family(u, 0.0, {0.0, 0.0}, 1.0);
  const EnergyBreakdown e = resonant_energy(u);
  r.energy_kinetic = e.kinetic;
  r.energy_sextic = e.sextic;
  r.energy_total = e.total;
  r.norm_l2 = norm(u, NormSpec{2, 0.0});
  r.norm_l2_hbeta = norm(u, NormSpec{2, beta_});
  r.norm_l2_h1 = norm(u, NormSpec{2, 1.0});
  r.morawetz = morawetz_action(u);
  r.morawetz_ceiling = morawetz_bound(u);
  if (with_brackets_) {
    const BracketResiduals br = bracket_residuals(u);
    r.bracket_mass = br.mass;
    r.bracket_momentum = br.momentum;
  }
  r.contamination = outer_mass_fraction(u);

  const double pb = std::pow(norm(u, NormSpec{6, beta_}), 6.0);
  const double p1 = std::pow(norm(u, NormSpec{6, 1.0}), 6.0);
  SpectralField pullback = free_evolve(u, -t);
  if (have_prev_) {
    const double dt = t - prev_t_;
    l6b_int_ += 0.5 * dt * (l6b_pow_prev_ + pb);
    l61_int_ += 0.5 * dt * (l61_pow_prev_ + p1);
    r.cauchy_defect = norm(pullback - *prev_pullback_, NormSpec{2, 1.0});
  }
  r.l6_hbeta_accum = std::pow(std::max(0.0, l6b_int_), 1.0 / 6.0);
  r.l6_h1_accum = std::pow(std::max(0.0, l61_int_), 1.0 / 6.0);
  l6b_pow_prev_ = pb;
  l61_pow_prev_ = p1;
  prev_pullback_ = std::move(pullback);
  have_prev_ = true;
  prev_t_ = t;
  return r;
}

namespace {

// L^2_x h^s_y norm of a cylinder field through its y-mode decomposition.
double cylinder_hs_norm(const CylinderField& u, int p, double s) {
  const std::size_t nx = u.grid_x().Nx, ny = u.Ny();
  const auto& plan = Fft::get({static_cast<int>(ny)});
  const double dy = 2.0 * kPi / static_cast<double>(ny);
  std::vector<double> d(nx, 0.0);
  parallel_for_chunks(nx, [&](std::size_t bx, std::size_t ex) {
    std::vector<cplx> row(ny);
    for (std::size_t ix = bx; ix < ex; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) row[iy] = u.at(ix, iy);
      plan.forward(row.data(), row.data());
      double acc = 0.0;
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double k2 = static_cast<double>(u.freq_y(iy) * u.freq_y(iy));
        acc += std::pow(1.0 + k2, s) * std::norm(row[iy]) / static_cast<double>(ny);
      }
      d[ix] = acc * dy;
    }
  });
  if (p == 2) return std::sqrt(pairwise_sum(d) * u.grid_x().dx());
  for (auto& v : d) v = v * v * v;
  return std::pow(pairwise_sum(d) * u.grid_x().dx(), 1.0 / 6.0);
}

double cylinder_outer_mass_fraction(const CylinderField& u) {
  const auto rho = u.mass_density_x();
  std::vector<double> in(rho.size(), 0.0), out(rho.size(), 0.0);
  const double half = u.grid_x().L / 2.0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    (std::fabs(u.grid_x().x(i)) <= half ? in[i] : out[i]) = rho[i];
  const double o = pairwise_sum(out), tot = o + pairwise_sum(in);
  return tot > 0.0 ? o / tot : 0.0;
}

}  // namespace

DiagnosticsRecord TrajectorySampler::sample_cylinder(const CylinderField& u, double t) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass_100 = u.mass();
  const auto mom = u.momentum();
  r.mass_010 = mom[0];
  r.mass_001 = mom[1];
  r.energy_kinetic = u.energy_kinetic();
  r.energy_sextic = u.energy_potential();
  r.energy_total = r.energy_kinetic + r.energy_sextic;
  r.norm_l2 = cylinder_hs_norm(u, 2, 0.0);
  r.norm_l2_hbeta = cylinder_hs_norm(u, 2, beta_);
  r.norm_l2_h1 = cylinder_hs_norm(u, 2, 1.0);

  // Interaction action from the y-integrated mass/momentum densities.
  {
    const std::size_t nx = u.grid_x().Nx, ny = u.Ny();
    const double dy = 2.0 * kPi / static_cast<double>(ny);
    std::vector<double> A = u.mass_density_x(), B(nx, 0.0);
    // d/dx via the x-spectrum of each y column.
    CylinderField du = u;
    const auto& plan = Fft::get({static_cast<int>(nx), static_cast<int>(ny)});
    plan.forward(du.values().data(), du.values().data());
    const double inv = 1.0 / static_cast<double>(du.values().size());
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const cplx f(0.0, u.grid_x().xi(ix));
      for (std::size_t iy = 0; iy < ny; ++iy) du.values()[ix * ny + iy] *= f * inv;
    }
    plan.backward(du.values().data(), du.values().data());
    for (std::size_t ix = 0; ix < nx; ++ix) {
      double acc = 0.0;
      for (std::size_t iy = 0; iy < ny; ++iy)
        acc += (std::conj(u.at(ix, iy)) * du.at(ix, iy)).imag();
      B[ix] = acc * dy;
    }
    r.morawetz = paired_action(A, B, u.grid_x().dx());
    std::vector<double> dsq(du.values().size());
    for (std::size_t i = 0; i < dsq.size(); ++i) dsq[i] = std::norm(du.values()[i]);
    const double dl2 = std::sqrt(pairwise_sum(dsq) * u.grid_x().dx() * dy);
    const double l2 = std::sqrt(u.mass());
    r.morawetz_ceiling = 2.0 * l2 * l2 * l2 * dl2;
  }

  r.virial = bilinear_virial(u);
  if (have_virial_prev_ && t > virial_prev_t_)
    r.virial_rate = (r.virial - virial_prev_) / (t - virial_prev_t_);
  virial_prev_ = r.virial;
  virial_prev_t_ = t;
  have_virial_prev_ = true;

  const double pb = std::pow(cylinder_hs_norm(u, 6, beta_), 6.0);
  const double p1 = std::pow(cylinder_hs_norm(u, 6, 1.0), 6.0);
  if (have_prev_) {
    const double dt = t - prev_t_;
    l6b_int_ += 0.5 * dt * (l6b_pow_prev_ + pb);
    l61_int_ += 0.5 * dt * (l61_pow_prev_ + p1);
  }
  r.l6_hbeta_accum = std::pow(std::max(0.0, l6b_int_), 1.0 / 6.0);
  r.l6_h1_accum = std::pow(std::max(0.0, l61_int_), 1.0 / 6.0);
  l6b_pow_prev_ = pb;
  l61_pow_prev_ = p1;
  have_prev_ = true;
  prev_t_ = t;
  r.contamination = cylinder_outer_mass_fraction(u);
  return r;
}

void write_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream os(path);
  if (!os) fail("write_csv: cannot open " + path);
  const auto& cols = DiagnosticsRecord::csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : records) os << r.csv_row() << '\n';
}

}  // namespace rqnls
