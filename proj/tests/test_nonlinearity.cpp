#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rqnls/fields.hpp"
#include "rqnls/nonlinearity.hpp"

using namespace rqnls;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double rel_gap(const SpectralField& a, const SpectralField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    num += std::norm(a.values()[i] - b.values()[i]);
    den += std::norm(b.values()[i]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}
}  // namespace

TEST_CASE("single-mode field reduces to the scalar quintic") {
  const Grid1D g(10.0, 128);
  for (std::int64_t k : {0, 2, -3}) {
    SpectralField u(1, 3, g);
    const std::size_t mk = mode_offset(ModeIndex::make1(k), 3);
    for (std::size_t i = 0; i < g.Nx; ++i)
      u.at(mk, i) = std::exp(-g.x(i) * g.x(i)) * cplx(1.0, 0.5);
    for (const auto& F : {eval_F_direct(u, shared_table(1, 3)), eval_F_fft(u)}) {
      for (std::size_t m = 0; m < u.n_modes(); ++m)
        for (std::size_t i = 0; i < g.Nx; ++i) {
          const cplx want = m == mk ? std::pow(std::abs(u.at(mk, i)), 4.0) * u.at(mk, i)
                                    : cplx{};
          CHECK(std::abs(F.at(m, i) - want) < 1e-12);
        }
    }
  }
}

TEST_CASE("zero field maps to zero") {
  const Grid1D g(10.0, 64);
  const SpectralField u(1, 2, g);
  for (const auto& F : {eval_F_direct(u, shared_table(1, 2)), eval_F_fft(u)})
    for (const auto& v : F.values()) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("two constant modes against the five-fold nested-loop oracle") {
  const Grid1D g(4.0, 8);
  SpectralField u(1, 1, g);
  const cplx a(0.8, -0.2), b(0.3, 0.6);
  for (auto& v : u.row(ModeIndex::make1(0))) v = a;
  for (auto& v : u.row(ModeIndex::make1(1))) v = b;
  auto amp = [&](std::int64_t j) { return j == 0 ? a : (j == 1 ? b : cplx{}); };
  for (std::int64_t j = -1; j <= 1; ++j) {
    cplx want{};
    for (std::int64_t j1 = -1; j1 <= 1; ++j1)
      for (std::int64_t j2 = -1; j2 <= 1; ++j2)
        for (std::int64_t j3 = -1; j3 <= 1; ++j3)
          for (std::int64_t j4 = -1; j4 <= 1; ++j4)
            for (std::int64_t j5 = -1; j5 <= 1; ++j5)
              if (j1 - j2 + j3 - j4 + j5 == j &&
                  j1 * j1 - j2 * j2 + j3 * j3 - j4 * j4 + j5 * j5 == j * j)
                want += amp(j1) * std::conj(amp(j2)) * amp(j3) * std::conj(amp(j4)) * amp(j5);
    const auto F = eval_F_direct(u, shared_table(1, 1));
    const auto Ff = eval_F_fft(u);
    CHECK(std::abs(F.at(mode_offset(ModeIndex::make1(j), 1), 0) - want) < 1e-13);
    CHECK(std::abs(Ff.at(mode_offset(ModeIndex::make1(j), 1), 0) - want) < 1e-13);
  }
}

TEST_CASE("J = 0 is the scalar quintic through the lift") {
  const Grid1D g(8.0, 64);
  SpectralField u(1, 0, g);
  for (std::size_t i = 0; i < g.Nx; ++i)
    u.at(0, i) = cplx(std::sin(0.3 * g.x(i)), 0.25) * std::exp(-0.1 * g.x(i) * g.x(i));
  const auto F = eval_F_fft(u);
  for (std::size_t i = 0; i < g.Nx; ++i) {
    const cplx want = std::pow(std::abs(u.at(0, i)), 4.0) * u.at(0, i);
    CHECK(std::abs(F.at(0, i) - want) < 1e-13);
  }
}

TEST_CASE("evaluator cross-agreement on random fields (both dims)") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const Grid1D g(10.0, 64);
    const auto u = random_field(1, 3, g, 100 + s);
    worst = std::max(worst, rel_gap(eval_F_fft(u), eval_F_direct(u, shared_table(1, 3))));
  }
  for (std::uint64_t s = 0; s < 2; ++s) {
    const Grid1D g(10.0, 32);
    const auto u = random_field(2, 1, g, 200 + s);
    worst = std::max(worst, rel_gap(eval_F_fft(u), eval_F_direct(u, shared_table(2, 1))));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("lift capacity guard names the required sizes") {
  const Grid1D g(2.0, 2);
  const SpectralField u(2, 28, g);
  CHECK_THROWS_WITH_AS(eval_F_fft(u), doctest::Contains("points per spatial sample"),
                       std::runtime_error);
}

TEST_CASE("sextic density: trivial and cross-oracle cases") {
  const Grid1D g(10.0, 64);
  SUBCASE("zero field") {
    for (double v : sextic_density(SpectralField(1, 2, g))) CHECK(v == 0.0);
  }
  SUBCASE("single mode gives |g(x)|^6") {
    SpectralField u(1, 2, g);
    const std::size_t mk = mode_offset(ModeIndex::make1(-1), 2);
    for (std::size_t i = 0; i < g.Nx; ++i)
      u.at(mk, i) = std::exp(-g.x(i) * g.x(i)) * cplx(0.9, -0.4);
    const auto D = sextic_density(u);
    for (std::size_t i = 0; i < g.Nx; ++i)
      CHECK(D[i] == doctest::Approx(std::pow(std::abs(u.at(mk, i)), 6.0)).epsilon(1e-12));
  }
  SUBCASE("random field: positivity and the direct-sum cross oracle") {
    const auto u = random_field(1, 3, g, 42);
    const auto D = sextic_density(u);
    double mn = 0.0, mx = 0.0;
    for (double v : D) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    CHECK(mn >= -1e-12 * mx);
    // integral D dx == sum_j integral conj(u_j) F_j dx from the direct route
    const auto F = eval_F_direct(u, shared_table(1, 3));
    cplx acc{};
    for (std::size_t m = 0; m < u.n_modes(); ++m)
      for (std::size_t i = 0; i < g.Nx; ++i)
        acc += std::conj(u.at(m, i)) * F.at(m, i);
    const double direct_int = acc.real() * g.dx();
    double lift_int = 0.0;
    for (double v : D) lift_int += v;
    lift_int *= g.dx();
    CHECK(std::fabs(lift_int - direct_int) / std::fabs(direct_int) < 1e-10);
    CHECK(std::fabs(acc.imag()) * g.dx() < 1e-12 * std::fabs(direct_int));
  }
}

TEST_CASE("resonant energy: Gaussian closed forms") {
  const Grid1D g(20.0, 1024);
  SpectralField u(1, 1, g);
  const std::size_t m0 = mode_offset(ModeIndex::make1(0), 1);
  for (std::size_t i = 0; i < g.Nx; ++i) u.at(m0, i) = std::exp(-g.x(i) * g.x(i));
  const auto e = resonant_energy(u);
  // (1/2) integral |d/dx e^{-x^2}|^2 = (1/2) sqrt(pi/2)
  CHECK(e.kinetic == doctest::Approx(0.5 * std::sqrt(kPi / 2.0)).epsilon(1e-8));
  // (1/6) integral e^{-6x^2} = (1/6) sqrt(pi/6)
  CHECK(e.sextic == doctest::Approx(std::sqrt(kPi / 6.0) / 6.0).epsilon(1e-8));
  CHECK(e.total == doctest::Approx(e.kinetic + e.sextic));

  SUBCASE("scaling homogeneity") {
    SpectralField v = u;
    v *= cplx(1.7, 0.0);
    const auto es = resonant_energy(v);
    CHECK(es.kinetic == doctest::Approx(1.7 * 1.7 * e.kinetic).epsilon(1e-12));
    CHECK(es.sextic == doctest::Approx(std::pow(1.7, 6.0) * e.sextic).epsilon(1e-12));
  }
}

TEST_CASE("sextic energy: lift route equals the double-index route") {
  const Grid1D g(10.0, 64);
  for (std::uint64_t s : {1u, 9u}) {
    const auto u = random_field(1, 2, g, s);
    const auto e = resonant_energy(u);
    const double pair = sextic_energy_pair_form(u);
    CHECK(pair == doctest::Approx(e.sextic).epsilon(1e-11));
  }
}

TEST_CASE("mass family") {
  const Grid1D g(10.0, 256);
  SUBCASE("unit-mass normalization") {
    auto u = random_field(1, 2, g, 3);
    const double l2 = norm(u, NormSpec{2, 0.0});
    u *= cplx(1.0 / l2, 0.0);
    CHECK(mass_family(u, 1.0, {0.0, 0.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("parity kills the first-moment mass") {
    SpectralField u(1, 2, g);
    for (std::int64_t j = -2; j <= 2; ++j) {
      const double w = 1.0 / (1.0 + std::abs(j));
      for (std::size_t i = 0; i < g.Nx; ++i)
        u.at(mode_offset(ModeIndex::make1(j), 2), i) = w * std::exp(-g.x(i) * g.x(i));
    }
    CHECK(std::fabs(mass_family(u, 0.0, {1.0, 0.0}, 0.0)) < 1e-14);
  }
  SUBCASE("matches the mode-by-mode quadrature oracle") {
    const auto u = random_field(2, 1, g, 17);
    const double a = 0.3, b0 = -1.1, b1 = 0.7, c = 2.2;
    double oracle = 0.0;
    for (std::size_t m = 0; m < u.n_modes(); ++m) {
      const auto& j = u.modes()[m];
      double sq = 0.0;
      for (std::size_t i = 0; i < g.Nx; ++i) sq += std::norm(u.at(m, i));
      sq *= g.dx();
      oracle += (a + b0 * static_cast<double>(j.c[0]) + b1 * static_cast<double>(j.c[1]) +
                 c * static_cast<double>(j.norm_sq())) *
                sq;
    }
    CHECK(mass_family(u, a, {b0, b1}, c) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("bracket residuals") {
  const Grid1D g(12.0, 256);
  SUBCASE("zero field guarded") {
    const auto r = bracket_residuals(SpectralField(1, 2, g));
    CHECK(r.mass == 0.0);
    CHECK(r.momentum == 0.0);
  }
  SUBCASE("random fields satisfy both identities") {
    for (std::uint64_t s : {4u, 5u, 6u}) {
      const auto u = random_field(1, 2, g, s, 1.25);
      const auto r = bracket_residuals(u);
      CHECK(r.mass <= 1e-12);
      CHECK(r.momentum <= 1e-8);
    }
  }
}

TEST_CASE("gauge covariance of F") {
  const Grid1D g(10.0, 64);
  const auto u = random_field(1, 2, g, 77);
  const double a = 0.7, b = -0.4, c = 1.3;
  SpectralField v = u;
  for (std::size_t m = 0; m < u.n_modes(); ++m) {
    const auto& j = u.modes()[m];
    const double ph = a + b * static_cast<double>(j.c[0]) + c * static_cast<double>(j.norm_sq());
    for (auto& z : v.row(m)) z *= cplx(std::cos(ph), std::sin(ph));
  }
  auto Fu = eval_F_direct(u, shared_table(1, 2));
  const auto Fv = eval_F_direct(v, shared_table(1, 2));
  for (std::size_t m = 0; m < u.n_modes(); ++m) {
    const auto& j = u.modes()[m];
    const double ph = a + b * static_cast<double>(j.c[0]) + c * static_cast<double>(j.norm_sq());
    for (auto& z : Fu.row(m)) z *= cplx(std::cos(ph), std::sin(ph));
  }
  CHECK(rel_gap(Fv, Fu) < 1e-12);
}

TEST_CASE("table/field shape guards") {
  const Grid1D g(10.0, 64);
  const auto u = random_field(1, 3, g, 1);
  CHECK_THROWS(eval_F_direct(u, shared_table(1, 2)));  // table cutoff too small
  // A larger table must be usable and agree with the matching one.
  const auto F3 = eval_F_direct(u, shared_table(1, 3));
  const auto F4 = eval_F_direct(u, shared_table(1, 4));
  CHECK(rel_gap(F4, F3) < 1e-14);
}
