#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rqnls/resonance.hpp"

using namespace rqnls;

namespace {

// Brute-force oracle: all of [-J,J]^5, both constraints checked literally.
std::vector<ResonantTuple> brute_dim1(std::int64_t j, std::int64_t J) {
  std::vector<ResonantTuple> out;
  for (std::int64_t a = -J; a <= J; ++a)
    for (std::int64_t b = -J; b <= J; ++b)
      for (std::int64_t c = -J; c <= J; ++c)
        for (std::int64_t d = -J; d <= J; ++d)
          for (std::int64_t e = -J; e <= J; ++e)
            if (a - b + c - d + e == j &&
                a * a - b * b + c * c - d * d + e * e == j * j)
              out.push_back({{ModeIndex::make1(a), ModeIndex::make1(b), ModeIndex::make1(c),
                              ModeIndex::make1(d), ModeIndex::make1(e)}});
  std::sort(out.begin(), out.end());
  return out;
}

double brute_weighted_dim1(std::int64_t j, std::int64_t K, double beta) {
  double tot = 0.0;
  for (std::int64_t p1 = -K; p1 <= K; ++p1)
    for (std::int64_t p2 = -K; p2 <= K; ++p2)
      for (std::int64_t p3 = -K; p3 <= K; ++p3)
        for (std::int64_t p4 = -K; p4 <= K; ++p4) {
          const std::int64_t p5 = j - p1 + p2 - p3 + p4;
          if (p5 < -K || p5 > K) continue;
          if (p1 * p1 - p2 * p2 + p3 * p3 - p4 * p4 + p5 * p5 != j * j) continue;
          if (2 * std::abs(p5) < std::max({std::abs(j), std::abs(p2), std::abs(p4)})) continue;
          tot += std::pow(1.0 + p1 * p1, -beta) * std::pow(1.0 + p2 * p2, -beta) *
                 std::pow(1.0 + p3 * p3, -beta) * std::pow(1.0 + p4 * p4, -beta) /
                 (1.0 + p5 * p5);
        }
  return (1.0 + static_cast<double>(j * j)) * tot;
}

double brute_weighted_dim2(const ModeIndex& j, std::int64_t K, double beta) {
  double tot = 0.0;
  const auto lat = mode_lattice(2, K);
  for (const auto& p1 : lat)
    for (const auto& p2 : lat)
      for (const auto& p3 : lat)
        for (const auto& p4 : lat) {
          ModeIndex p5 = j - p1 + p2 - p3 + p4;
          p5.dim = 2;
          if (p5.sup_norm() > K) continue;
          if (p1.norm_sq() - p2.norm_sq() + p3.norm_sq() - p4.norm_sq() + p5.norm_sq() !=
              j.norm_sq())
            continue;
          if (4 * p5.norm_sq() < std::max({j.norm_sq(), p2.norm_sq(), p4.norm_sq()}))
            continue;
          tot += std::pow(1.0 + static_cast<double>(p1.norm_sq()), -beta) *
                 std::pow(1.0 + static_cast<double>(p2.norm_sq()), -beta) *
                 std::pow(1.0 + static_cast<double>(p3.norm_sq()), -beta) *
                 std::pow(1.0 + static_cast<double>(p4.norm_sq()), -beta) /
                 (1.0 + static_cast<double>(p5.norm_sq()));
        }
  return (1.0 + static_cast<double>(j.norm_sq())) * tot;
}

double brute_elementary(std::int64_t j, std::int64_t K) {
  double tot = 0.0;
  for (std::int64_t a = -K; a <= K; ++a)
    for (std::int64_t b = -K; b <= K; ++b)
      for (std::int64_t c = -K; c <= K; ++c)
        for (std::int64_t d = -K; d <= K; ++d) {
          const std::int64_t e = j - a + b - c + d;
          if (e < -K || e > K) continue;
          tot += 1.0 / ((1.0 + a * a) * (1.0 + b * b) * (1.0 + c * c) * (1.0 + d * d) *
                        (1.0 + e * e));
        }
  return (1.0 + static_cast<double>(j * j)) * tot;
}

}  // namespace

TEST_CASE("R(0) with cutoff 0 is the zero tuple") {
  const auto got = enumerate_resonances(ModeIndex::make1(0), 0);
  REQUIRE(got.size() == 1);
  for (const auto& m : got[0].m) CHECK(m.c[0] == 0);
}

TEST_CASE("pairwise-cancellation membership (2,5,5,-3,-3) in R(2)") {
  const ResonantTuple t{{ModeIndex::make1(2), ModeIndex::make1(5), ModeIndex::make1(5),
                         ModeIndex::make1(-3), ModeIndex::make1(-3)}};
  CHECK(in_resonance_set(t, ModeIndex::make1(2)));
  // Tweaked copies fall outside.
  ResonantTuple bad = t;
  bad.m[4].c[0] = -2;
  CHECK(!in_resonance_set(bad, ModeIndex::make1(2)));
}

TEST_CASE("enumeration matches the brute-force oracle, dim 1") {
  for (std::int64_t J = 0; J <= 4; ++J)
    for (std::int64_t j = -J; j <= J; ++j) {
      const auto got = enumerate_resonances(ModeIndex::make1(j), J);
      const auto want = brute_dim1(j, J);
      REQUIRE(got.size() == want.size());
      CHECK(got == want);
    }
  // Frozen count from the oracle: |R(1) cap [-2,2]^5| = 115.
  CHECK(enumerate_resonances(ModeIndex::make1(1), 2).size() == 115);
}

TEST_CASE("canonical order is lexicographic and duplicate-free") {
  const auto got = enumerate_resonances(ModeIndex::make1(1), 3);
  CHECK(std::is_sorted(got.begin(), got.end()));
  CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
}

TEST_CASE("trivial family (j,k,k,m,m) always present") {
  const std::int64_t J = 5;
  const auto& tab = ResonanceTable(1, J);
  for (std::int64_t j = -J; j <= J; ++j)
    for (std::int64_t k = -J; k <= J; ++k)
      for (std::int64_t m = -J; m <= J; ++m) {
        const ResonantTuple t{{ModeIndex::make1(j), ModeIndex::make1(k), ModeIndex::make1(k),
                               ModeIndex::make1(m), ModeIndex::make1(m)}};
        const auto& list = tab.tuples(ModeIndex::make1(j));
        CHECK(std::binary_search(list.begin(), list.end(), t));
      }
}

TEST_CASE("dim-2 enumeration matches per-mode 4-loop oracle at small cutoffs") {
  for (std::int64_t J = 0; J <= 2; ++J) {
    for (const auto& j : mode_lattice(2, J)) {
      const auto got = enumerate_resonances(j, J);
      // 4-loop oracle with j5 solved from the linear constraint.
      std::vector<ResonantTuple> want;
      const auto lat = mode_lattice(2, J);
      for (const auto& a : lat)
        for (const auto& b : lat)
          for (const auto& c : lat)
            for (const auto& d : lat) {
              ModeIndex e = j - a + b - c + d;
              e.dim = 2;
              if (e.sup_norm() > J) continue;
              if (a.norm_sq() - b.norm_sq() + c.norm_sq() - d.norm_sq() + e.norm_sq() !=
                  j.norm_sq())
                continue;
              want.push_back({{a, b, c, d, e}});
            }
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
}

TEST_CASE("cutoff overflow guard") {
  CHECK_THROWS(enumerate_resonances(ModeIndex::make1(0), (std::int64_t{1} << 20) + 1));
  CHECK_THROWS(enumerate_resonances(ModeIndex::make1(5), 2));  // |j| > J
}

TEST_CASE("circle lattice points: x^2+y^2 = 25 has 12 points") {
  const auto pts = circle_lattice_points(CircleSpec{{0, 0}, 100}, 0.0);
  CHECK(pts.size() == 12);
  for (const auto& p : pts) CHECK(p.norm_sq() == 25);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("degenerate circle of radius zero") {
  CHECK(circle_lattice_points(CircleSpec{{4, -6}, 0}, 0.0).size() == 1);  // p = (2,-3)
  CHECK(circle_lattice_points(CircleSpec{{1, 0}, 0}, 0.0).empty());      // half-integer center
}

TEST_CASE("half-integer center: (2x-1)^2 + (2y)^2 = 2") {
  const auto pts = circle_lattice_points(CircleSpec{{1, 0}, 2}, 0.0);
  // Oracle: bounding-box enumeration.
  std::vector<ModeIndex> want;
  for (std::int64_t x = -2; x <= 2; ++x)
    for (std::int64_t y = -2; y <= 2; ++y)
      if ((2 * x - 1) * (2 * x - 1) + 4 * y * y == 2) want.push_back(ModeIndex::make2(x, y));
  std::sort(want.begin(), want.end());
  CHECK(pts == want);
  CHECK(pts.size() == 2);  // (0,0) and (1,0)
}

TEST_CASE("min-norm filter") {
  const auto all = circle_lattice_points(CircleSpec{{0, 0}, 100}, 0.0);
  const auto far = circle_lattice_points(CircleSpec{{0, 0}, 100}, 5.0);
  CHECK(all == far);  // every point has |p| = 5 exactly
  CHECK(circle_lattice_points(CircleSpec{{0, 0}, 100}, 5.0001).empty());
}

TEST_CASE("elementary sum: frozen oracle values") {
  CHECK(elementary_sum(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(elementary_sum(1, 1) == doctest::Approx(13.125).epsilon(1e-13));
  CHECK(elementary_sum(2, 2) == doctest::Approx(47.25349999999998).epsilon(1e-12));
  for (std::int64_t j : {0, 1, 3}) {
    for (std::int64_t K : {3, 5}) {
      CHECK(elementary_sum(j, K) ==
            doctest::Approx(brute_elementary(j, K)).epsilon(1e-12));
    }
  }
}

TEST_CASE("elementary sum is monotone nondecreasing in K with decaying increments") {
  double prev = 0.0, prev_inc = 1e300;
  for (std::int64_t K : {8, 16, 32, 64, 128}) {
    const double v = elementary_sum(3, K);
    CHECK(v >= prev);
    if (prev > 0.0) {
      const double inc = v - prev;
      CHECK(inc <= prev_inc);
      prev_inc = inc;
    }
    prev = v;
  }
}

TEST_CASE("weighted resonant sum dim 1: oracle and trivial cases") {
  CHECK(weighted_resonant_sum(ModeIndex::make1(0), 0, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // Frozen nested-loop oracle values.
  CHECK(weighted_resonant_sum(ModeIndex::make1(0), 4, 0.5) ==
        doctest::Approx(8.251232268363106).epsilon(1e-12));
  CHECK(weighted_resonant_sum(ModeIndex::make1(1), 4, 0.5) ==
        doctest::Approx(18.257819407393253).epsilon(1e-12));
  // Spec-size case against the in-test oracle.
  CHECK(weighted_resonant_sum(ModeIndex::make1(0), 8, 0.5) ==
        doctest::Approx(brute_weighted_dim1(0, 8, 0.5)).epsilon(1e-12));
  CHECK(weighted_resonant_sum(ModeIndex::make1(2), 8, 0.5) ==
        doctest::Approx(brute_weighted_dim1(2, 8, 0.5)).epsilon(1e-12));
}

TEST_CASE("weighted resonant sum dim 2 vs 4-loop oracle") {
  for (const auto& j : {ModeIndex::make2(0, 0), ModeIndex::make2(1, 0), ModeIndex::make2(1, 1)})
    CHECK(weighted_resonant_sum(j, 2, 0.9) ==
          doctest::Approx(brute_weighted_dim2(j, 2, 0.9)).epsilon(1e-12));
  CHECK(weighted_resonant_sum(ModeIndex::make2(0, 0), 3, 0.9) ==
        doctest::Approx(brute_weighted_dim2(ModeIndex::make2(0, 0), 3, 0.9)).epsilon(1e-12));
}

TEST_CASE("weighted sum rejects beta outside the lemma range") {
  CHECK_THROWS_WITH_AS(weighted_resonant_sum(ModeIndex::make1(0), 4, 0.2),
                       doctest::Contains("(3/8, 1)"), std::runtime_error);
  CHECK_THROWS_WITH_AS(weighted_resonant_sum(ModeIndex::make2(0, 0), 2, 0.5),
                       doctest::Contains("(7/8, 1)"), std::runtime_error);
}

TEST_CASE("resonance symmetry closure under admissible slot swaps") {
  const std::int64_t J = 3;
  for (std::int64_t j = -J; j <= J; ++j) {
    const auto base = enumerate_resonances(ModeIndex::make1(j), J);
    for (std::size_t k = 0; k < base.size(); k += 7) {
      const auto& m = base[k].m;
      for (const ResonantTuple& v : {ResonantTuple{{m[2], m[1], m[0], m[3], m[4]}},
                                     ResonantTuple{{m[0], m[3], m[2], m[1], m[4]}},
                                     ResonantTuple{{m[4], m[1], m[0], m[3], m[2]}}})
        CHECK(in_resonance_set(v, ModeIndex::make1(j)));
    }
  }
}
