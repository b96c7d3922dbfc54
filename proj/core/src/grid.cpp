#include "rqnls/grid.hpp"

#include <cmath>

#include "rqnls/fft.hpp"

namespace rqnls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid1D::Grid1D(double half_width, std::size_t points) : L(half_width), Nx(points) {
  if (!(L > 0.0)) fail("Grid1D: half width must be positive");
  if (!is_pow2(Nx)) fail("Grid1D: Nx must be a power of two");
}

double Grid1D::xi(std::size_t i) const {
  return kPi * static_cast<double>(freq_index(i)) / L;
}

double Grid1D::xi_nyquist() const { return kPi * static_cast<double>(Nx / 2) / L; }

SpectralField::SpectralField(int dim, std::int64_t J, Grid1D grid)
    : dim_(dim), J_(J), grid_(grid) {
  if (dim != 1 && dim != 2) fail("SpectralField: dim must be 1 or 2");
  if (J < 0) fail("SpectralField: cutoff must be nonnegative");
  modes_ = mode_lattice(dim, J);
  v_.assign(modes_.size() * grid_.Nx, cplx{});
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (v_.size() != o.v_.size()) fail("SpectralField: shape mismatch in +=");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (v_.size() != o.v_.size()) fail("SpectralField: shape mismatch in -=");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (auto& v : v_) v *= s;
  return *this;
}

namespace {

template <bool Forward>
SpectralField transform_x(const SpectralField& f) {
  SpectralField out = f;
  const std::size_t nx = f.grid().Nx;
  const auto& plan = Fft::get({static_cast<int>(nx)});
  const double scale = 1.0 / std::sqrt(static_cast<double>(nx));
  parallel_for(f.n_modes(), [&](std::size_t m) {
    cplx* p = out.row(m).data();
    if constexpr (Forward)
      plan.forward(p, p);
    else
      plan.backward(p, p);
    for (std::size_t i = 0; i < nx; ++i) p[i] *= scale;
  });
  return out;
}

}  // namespace

SpectralField fft_x(const SpectralField& f) { return transform_x<true>(f); }
SpectralField ifft_x(const SpectralField& f) { return transform_x<false>(f); }

double row_l2(const Grid1D& g, std::span<const cplx> row) {
  std::vector<double> sq(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) sq[i] = std::norm(row[i]);
  return std::sqrt(pairwise_sum(sq) * g.dx());
}

double norm(const SpectralField& f, const NormSpec& n) {
  const std::size_t nx = f.grid().Nx;
  const std::size_t nm = f.n_modes();
  std::vector<double> w(nm);
  for (std::size_t m = 0; m < nm; ++m)
    w[m] = std::pow(1.0 + static_cast<double>(f.modes()[m].norm_sq()), n.s);
  // density d(x) = sum_j <j>^{2s} |u_j(x)|^2, disjoint writes per point.
  std::vector<double> d(nx, 0.0);
  parallel_for_chunks(nx, [&](std::size_t b, std::size_t e) {
    for (std::size_t m = 0; m < nm; ++m) {
      const cplx* p = f.row(m).data();
      const double wm = w[m];
      for (std::size_t i = b; i < e; ++i) d[i] += wm * std::norm(p[i]);
    }
  });
  if (n.p == NormSpec::p_infinity) {
    double mx = 0.0;
    for (double v : d) mx = std::max(mx, v);
    return std::sqrt(mx);
  }
  if (n.p == 2) return std::sqrt(pairwise_sum(d) * f.grid().dx());
  if (n.p == 6) {
    for (auto& v : d) v = v * v * v;
    return std::pow(pairwise_sum(d) * f.grid().dx(), 1.0 / 6.0);
  }
  fail("norm: spatial exponent must be 2, 6, or infinity");
}

double lowpass_bump(double r) {
  r = std::fabs(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = r - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

SpectralField project_low(const SpectralField& f, double N) {
  if (!(N > 0.0)) fail("project_low: cutoff must be positive");
  SpectralField hat = fft_x(f);
  const std::size_t nx = f.grid().Nx;
  std::vector<double> mult(nx);
  for (std::size_t i = 0; i < nx; ++i) mult[i] = lowpass_bump(f.grid().xi(i) / N);
  parallel_for(hat.n_modes(), [&](std::size_t m) {
    cplx* p = hat.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) p[i] *= mult[i];
  });
  return ifft_x(hat);
}

SpectralField derivative_x(const SpectralField& f) {
  SpectralField hat = fft_x(f);
  const std::size_t nx = f.grid().Nx;
  parallel_for(hat.n_modes(), [&](std::size_t m) {
    cplx* p = hat.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) p[i] *= cplx(0.0, f.grid().xi(i));
  });
  return ifft_x(hat);
}

SpectralField translate_x(const SpectralField& f, double shift) {
  SpectralField hat = fft_x(f);
  const std::size_t nx = f.grid().Nx;
  std::vector<cplx> ph(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double a = -f.grid().xi(i) * shift;
    ph[i] = cplx(std::cos(a), std::sin(a));
  }
  parallel_for(hat.n_modes(), [&](std::size_t m) {
    cplx* p = hat.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) p[i] *= ph[i];
  });
  return ifft_x(hat);
}

std::optional<std::pair<ModeIndex, std::size_t>> detect_nonfinite(const SpectralField& f) {
  for (std::size_t m = 0; m < f.n_modes(); ++m) {
    const auto r = f.row(m);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!std::isfinite(r[i].real()) || !std::isfinite(r[i].imag()))
        return std::make_pair(f.modes()[m], i);
  }
  return std::nullopt;
}

double outer_mass_fraction(const SpectralField& f) {
  const std::size_t nx = f.grid().Nx;
  const double half = f.grid().L / 2.0;
  std::vector<double> inner(nx, 0.0), outer(nx, 0.0);
  for (std::size_t m = 0; m < f.n_modes(); ++m) {
    const cplx* p = f.row(m).data();
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = std::norm(p[i]);
      (std::fabs(f.grid().x(i)) <= half ? inner[i] : outer[i]) += v;
    }
  }
  const double in = pairwise_sum(inner), out = pairwise_sum(outer);
  const double tot = in + out;
  return tot > 0.0 ? out / tot : 0.0;
}

}  // namespace rqnls
