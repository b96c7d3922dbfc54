#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rqnls/fields.hpp"
#include "rqnls/grid.hpp"

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

TEST_CASE("grid constructor validates shape") {
  CHECK_THROWS(Grid1D(10.0, 100));  // not a power of two
  CHECK_THROWS(Grid1D(-1.0, 64));
  const Grid1D g(8.0, 64);
  CHECK(g.dx() == doctest::Approx(0.25));
  CHECK(g.x(0) == doctest::Approx(-8.0));
  CHECK(g.xi(1) == doctest::Approx(kPi / 8.0));
  CHECK(g.freq_index(63) == -1);
}

TEST_CASE("transform round trip and Parseval on random fields") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Grid1D g(10.0, 256);
    const auto u = random_field(1, 3, g, seed);
    CHECK(rel_gap(ifft_x(fft_x(u)), u) < 1e-13);
    const double a = norm(u, NormSpec{2, 0.0});
    const double b = norm(fft_x(u), NormSpec{2, 0.0});
    CHECK(std::fabs(a - b) / a < 1e-12);
  }
}

TEST_CASE("constant profile concentrates at xi = 0 with value c sqrt(Nx)") {
  const Grid1D g(5.0, 128);
  SpectralField u(1, 0, g);
  const cplx c(0.7, -0.3);
  for (auto& v : u.row(0)) v = c;
  const auto hat = fft_x(u);
  CHECK(std::abs(hat.at(0, 0) - c * std::sqrt(128.0)) < 1e-12);
  for (std::size_t i = 1; i < 128; ++i) CHECK(std::abs(hat.at(0, i)) < 1e-12);
}

TEST_CASE("Gaussian L2 norm matches the closed form") {
  const Grid1D g(20.0, 1024);
  SpectralField u(1, 0, g);
  for (std::size_t i = 0; i < g.Nx; ++i)
    u.at(0, i) = std::exp(-g.x(i) * g.x(i));
  // ||e^{-x^2}||_2 = (pi/2)^{1/4}
  CHECK(norm(u, NormSpec{2, 0.0}) ==
        doctest::Approx(std::pow(kPi / 2.0, 0.25)).epsilon(1e-8));
  CHECK(norm(SpectralField(1, 2, g), NormSpec{2, 1.0}) == 0.0);
}

TEST_CASE("h^s weight arithmetic: equal profiles on modes 0 and +-1") {
  const Grid1D g(20.0, 512);
  SpectralField u(1, 1, g);
  for (std::size_t i = 0; i < g.Nx; ++i) {
    const cplx v = std::exp(-g.x(i) * g.x(i));
    u.at(0, i) = v;  // j = -1
    u.at(1, i) = v;  // j = 0
  }
  SpectralField single(1, 0, g);
  for (std::size_t i = 0; i < g.Nx; ++i) single.at(0, i) = std::exp(-g.x(i) * g.x(i));
  const double n1 = norm(single, NormSpec{2, 1.0});
  // weights: <0>^2 = 1, <1>^2 = 2 -> norm^2 = 3 x single^2
  CHECK(norm(u, NormSpec{2, 1.0}) == doctest::Approx(std::sqrt(3.0) * n1).epsilon(1e-12));
}

TEST_CASE("norm p=6 and p=infinity behave") {
  const Grid1D g(10.0, 256);
  SpectralField u(1, 0, g);
  for (std::size_t i = 0; i < g.Nx; ++i) u.at(0, i) = std::exp(-g.x(i) * g.x(i));
  // ||e^{-x^2}||_6 = (integral e^{-6x^2})^{1/6} = (pi/6)^{1/12}
  CHECK(norm(u, NormSpec{6, 0.0}) ==
        doctest::Approx(std::pow(kPi / 6.0, 1.0 / 12.0)).epsilon(1e-8));
  CHECK(norm(u, NormSpec{NormSpec::p_infinity, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lowpass bump: pinned values") {
  CHECK(lowpass_bump(0.3) == 1.0);
  CHECK(lowpass_bump(-1.0) == 1.0);
  CHECK(lowpass_bump(2.0) == 0.0);
  CHECK(lowpass_bump(-2.5) == 0.0);
  CHECK(lowpass_bump(1.5) == doctest::Approx(std::exp(1.0 - 1.0 / (1.0 - 0.25))).epsilon(1e-15));
  // Monotone on the ramp.
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    const double v = lowpass_bump(r);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("project_low: identity above Nyquist, annihilation, nesting") {
  const Grid1D g(10.0, 256);
  const auto u = random_field(1, 2, g, 5);
  CHECK(rel_gap(project_low(u, 2.0 * g.xi_nyquist()), u) < 1e-13);

  // Plane wave at xi0, cutoff xi0/4: |xi0/(xi0/4)| = 4 >= 2 kills it.
  SpectralField pw(1, 0, g);
  const double xi0 = 32.0 * kPi / g.L;
  for (std::size_t i = 0; i < g.Nx; ++i)
    pw.at(0, i) = cplx(std::cos(xi0 * g.x(i)), std::sin(xi0 * g.x(i)));
  CHECK(norm(project_low(pw, xi0 / 4.0), NormSpec{2, 0.0}) < 1e-13);

  // Nesting: the wider cutoff is exactly transparent to the narrower one.
  const auto narrow = project_low(u, 1.7);
  const auto nested = project_low(narrow, 3.4);
  CHECK(rel_gap(nested, narrow) < 1e-14);

  CHECK_THROWS(project_low(u, 0.0));
  CHECK_THROWS(project_low(u, -1.0));
}

TEST_CASE("project_low against the direct multiplier oracle") {
  const Grid1D g(20.0, 512);
  SpectralField u(1, 0, g);
  for (std::size_t i = 0; i < g.Nx; ++i) u.at(0, i) = std::exp(-g.x(i) * g.x(i));
  const double N = 1.0;
  const auto hat = fft_x(u);
  SpectralField oracle_hat = hat;
  for (std::size_t i = 0; i < g.Nx; ++i)
    oracle_hat.at(0, i) = hat.at(0, i) * lowpass_bump(g.xi(i) / N);
  CHECK(rel_gap(project_low(u, N), ifft_x(oracle_hat)) < 1e-14);
  // L2 mass never grows (multiplier <= 1), up to roundoff slack.
  CHECK(norm(project_low(u, N), NormSpec{2, 0.0}) <=
        norm(u, NormSpec{2, 0.0}) * (1.0 + 1e-13));
}

TEST_CASE("detect_nonfinite finds the first bad sample") {
  const Grid1D g(10.0, 64);
  SpectralField u(1, 2, g);
  CHECK(!detect_nonfinite(u));
  u.at(mode_offset(ModeIndex::make1(1), 2), 7) = cplx(std::nan(""), 0.0);
  const auto hit = detect_nonfinite(u);
  REQUIRE(hit.has_value());
  CHECK(hit->first == ModeIndex::make1(1));
  CHECK(hit->second == 7);
}

TEST_CASE("outer mass fraction flags spread-out fields") {
  const Grid1D g(10.0, 256);
  SpectralField tight(1, 0, g), wide(1, 0, g);
  for (std::size_t i = 0; i < g.Nx; ++i) {
    tight.at(0, i) = std::exp(-g.x(i) * g.x(i));
    wide.at(0, i) = 1.0;
  }
  CHECK(outer_mass_fraction(tight) < 1e-6);
  CHECK(outer_mass_fraction(wide) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("translate_x shifts grid-exactly") {
  const Grid1D g(10.0, 256);
  const auto u = random_field(1, 1, g, 11);
  const auto moved = translate_x(u, 4.0 * g.dx());
  for (std::size_t m = 0; m < u.n_modes(); ++m)
    for (std::size_t i = 0; i < g.Nx; ++i)
      CHECK(std::abs(moved.at(m, (i + 4) % g.Nx) - u.at(m, i)) < 1e-12);
}
