#include "rqnls/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "rqnls/faults.hpp"
#include "rqnls/util.hpp"

namespace rqnls {

namespace {

void check_cutoff(std::int64_t J, const char* what) {
  if (J < 0) fail(std::string(what) + ": cutoff must be nonnegative");
  if (J > kMaxCutoff)
    fail(std::string(what) + ": cutoff " + std::to_string(J) +
         " exceeds the overflow-safe limit 2^20 for 64-bit square arithmetic");
}

}  // namespace

ModeIndex alternating_sum(const ResonantTuple& t) {
  ModeIndex s = t.m[0] - t.m[1] + t.m[2] - t.m[3] + t.m[4];
  s.dim = t.m[0].dim;
  return s;
}

std::int64_t signed_square_sum(const ResonantTuple& t) {
  const std::int64_t s4 = t.m[3].norm_sq();
  const std::int64_t flip =
      faults::active() == faults::Mutation::SquareConstraintSignFlip ? s4 : -s4;
  return t.m[0].norm_sq() - t.m[1].norm_sq() + t.m[2].norm_sq() + flip + t.m[4].norm_sq();
}

bool in_resonance_set(const ResonantTuple& t, const ModeIndex& j) {
  return alternating_sum(t) == j && signed_square_sum(t) == j.norm_sq();
}

namespace {

void enumerate_dim1(std::int64_t j, std::int64_t J, std::vector<ResonantTuple>& out) {
  const std::int64_t jsq = j * j;
  ResonantTuple t;
  for (auto& m : t.m) m.dim = 1;
  ModeIndex jm = ModeIndex::make1(j);
  for (std::int64_t j1 = -J; j1 <= J; ++j1) {
    for (std::int64_t j2 = -J; j2 <= J; ++j2) {
      for (std::int64_t j3 = -J; j3 <= J; ++j3) {
        // Remaining pair: j5 - j4 = sigma, j5^2 - j4^2 = tau.
        const std::int64_t sigma = j - j1 + j2 - j3;
        const std::int64_t tau = jsq - j1 * j1 + j2 * j2 - j3 * j3;
        t.m[0].c[0] = j1;
        t.m[1].c[0] = j2;
        t.m[2].c[0] = j3;
        if (sigma == 0) {
          if (tau != 0) continue;
          for (std::int64_t k = -J; k <= J; ++k) {
            t.m[3].c[0] = k;
            t.m[4].c[0] = k;
            if (in_resonance_set(t, jm)) out.push_back(t);
          }
        } else {
          if (tau % sigma != 0) continue;
          const std::int64_t q = tau / sigma;  // j4 + j5
          if ((q - sigma) % 2 != 0) continue;
          const std::int64_t j4 = (q - sigma) / 2;
          const std::int64_t j5 = (q + sigma) / 2;
          if (std::abs(j4) > J || std::abs(j5) > J) continue;
          t.m[3].c[0] = j4;
          t.m[4].c[0] = j5;
          if (in_resonance_set(t, jm)) out.push_back(t);
        }
      }
    }
  }
}

void enumerate_dim2(const ModeIndex& j, std::int64_t J, std::vector<ResonantTuple>& out) {
  const auto lattice = mode_lattice(2, J);
  const std::int64_t jsq = j.norm_sq();
  for (const ModeIndex& j1 : lattice) {
    for (const ModeIndex& j2 : lattice) {
      for (const ModeIndex& j4 : lattice) {
        // With j1, j2, j4 fixed, j3 lies on a circle and j5 = S - j3.
        const ModeIndex S = j2 + j4 + j - j1;
        const std::int64_t qr2 =
            2 * (j2.norm_sq() + j4.norm_sq() + jsq - j1.norm_sq()) - S.norm_sq();
        if (qr2 < 0) continue;
        CircleSpec circ{{S.c[0], S.c[1]}, qr2};
        for (const ModeIndex& j3 : circle_lattice_points(circ, 0.0)) {
          if (j3.sup_norm() > J) continue;
          ModeIndex j5 = S - j3;
          j5.dim = 2;
          if (j5.sup_norm() > J) continue;
          ResonantTuple t{{j1, j2, j3, j4, j5}};
          if (in_resonance_set(t, j)) out.push_back(t);
        }
      }
    }
  }
}

}  // namespace

std::vector<ResonantTuple> enumerate_resonances(const ModeIndex& j, std::int64_t J) {
  check_cutoff(J, "enumerate_resonances");
  if (j.dim != 1 && j.dim != 2) fail("enumerate_resonances: dim must be 1 or 2");
  if (j.sup_norm() > J) fail("enumerate_resonances: |j| exceeds the cutoff");
  std::vector<ResonantTuple> out;
  if (j.dim == 1)
    enumerate_dim1(j.c[0], J, out);
  else
    enumerate_dim2(j, J, out);
  std::sort(out.begin(), out.end());
  return out;
}

ResonanceTable::ResonanceTable(int dim, std::int64_t J) : dim_(dim), J_(J) {
  check_cutoff(J, "ResonanceTable");
  if (dim != 1 && dim != 2) fail("ResonanceTable: dim must be 1 or 2");
  modes_ = mode_lattice(dim, J);
  per_mode_.resize(modes_.size());
  parallel_for(modes_.size(),
               [this](std::size_t i) { per_mode_[i] = enumerate_resonances(modes_[i], J_); });
}

const std::vector<ResonantTuple>& ResonanceTable::tuples(const ModeIndex& j) const {
  if (j.dim != dim_ || j.sup_norm() > J_) fail("ResonanceTable::tuples: mode outside table");
  return per_mode_[mode_offset(j, J_)];
}

std::size_t ResonanceTable::total_tuples() const {
  std::size_t n = 0;
  for (const auto& v : per_mode_) n += v.size();
  return n;
}

std::vector<ModeIndex> circle_lattice_points(const CircleSpec& c, double min_norm) {
  std::vector<ModeIndex> out;
  const std::int64_t qr2 = c.quadrupled_radius_sq;
  if (qr2 < 0) return out;
  const auto s = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(qr2)))) + 1;
  const std::int64_t ax_par = std::abs(c.doubled_center[0]) % 2;
  const std::int64_t ay_par = std::abs(c.doubled_center[1]) % 2;
  const double min_sq = min_norm > 0 ? min_norm * min_norm : 0.0;
  // a = 2 p_x - dc_x must match dc_x's parity; likewise for b.
  std::int64_t a = -s;
  if (std::abs(a) % 2 != ax_par) ++a;
  for (; a <= s; a += 2) {
    const std::int64_t rem = qr2 - a * a;
    std::int64_t b = 0;
    if (rem < 0 || !perfect_square(rem, b)) continue;
    if (std::abs(b) % 2 != ay_par) continue;
    const std::int64_t px = (a + c.doubled_center[0]) / 2;
    for (std::int64_t sb : b == 0 ? std::vector<std::int64_t>{0}
                                  : std::vector<std::int64_t>{-b, b}) {
      const std::int64_t py = (sb + c.doubled_center[1]) / 2;
      ModeIndex p = ModeIndex::make2(px, py);
      if (static_cast<double>(p.norm_sq()) >= min_sq) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double elementary_sum(std::int64_t j, std::int64_t K) {
  check_cutoff(K, "elementary_sum");
  if (std::abs(j) > 5 * K) return 0.0;
  // Signs in the alternating constraint are absorbed by evenness of the
  // weight, so the sum is the 5-fold convolution of <n>^-2 at j.
  const std::size_t wn = static_cast<std::size_t>(2 * K + 1);
  std::vector<double> w(wn);
  for (std::int64_t n = -K; n <= K; ++n)
    w[static_cast<std::size_t>(n + K)] = 1.0 / (1.0 + static_cast<double>(n * n));
  std::vector<double> acc = w;  // support [-mK, mK] after m factors
  for (int m = 2; m <= 5; ++m) {
    std::vector<double> next(static_cast<std::size_t>(2 * m * K + 1), 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (acc[i] == 0.0) continue;
      const double ai = acc[i];
      for (std::size_t k = 0; k < wn; ++k) next[i + k] += ai * w[k];
    }
    acc.swap(next);
  }
  const double jb = 1.0 + static_cast<double>(j * j);
  return jb * acc[static_cast<std::size_t>(j + 5 * K)];
}

namespace {

double weighted_sum_dim1(std::int64_t j, std::int64_t K, double beta) {
  const std::int64_t jsq = j * j;
  const std::size_t wn = static_cast<std::size_t>(2 * K + 1);
  std::vector<double> wb(wn), w2(wn);
  for (std::int64_t n = -K; n <= K; ++n) {
    const double b2 = 1.0 + static_cast<double>(n * n);
    wb[static_cast<std::size_t>(n + K)] = std::pow(b2, -beta);
    w2[static_cast<std::size_t>(n + K)] = 1.0 / b2;
  }
  std::vector<double> partial(wn, 0.0);
  parallel_for(wn, [&](std::size_t ip2) {
    const std::int64_t p2 = static_cast<std::int64_t>(ip2) - K;
    double acc = 0.0;
    for (std::int64_t p4 = -K; p4 <= K; ++p4) {
      const std::int64_t lo = std::max({std::abs(j), std::abs(p2), std::abs(p4)});
      const double w24 = wb[ip2] * wb[static_cast<std::size_t>(p4 + K)];
      for (std::int64_t p5 = -K; p5 <= K; ++p5) {
        if (2 * std::abs(p5) < lo) continue;  // |p5| >= max(...)/2
        const std::int64_t T = j + p2 + p4 - p5;  // p1 + p3
        const std::int64_t t = jsq + p2 * p2 + p4 * p4 - p5 * p5;  // p1^2 + p3^2
        const std::int64_t disc = 2 * t - T * T;
        std::int64_t s = 0;
        if (disc < 0 || !perfect_square(disc, s)) continue;
        if ((T - s) % 2 != 0) continue;
        const double w245 = w24 * w2[static_cast<std::size_t>(p5 + K)];
        for (std::int64_t sg : s == 0 ? std::vector<std::int64_t>{0}
                                      : std::vector<std::int64_t>{-s, s}) {
          const std::int64_t p1 = (T + sg) / 2;
          const std::int64_t p3 = T - p1;
          if (std::abs(p1) > K || std::abs(p3) > K) continue;
          acc += w245 * wb[static_cast<std::size_t>(p1 + K)] *
                 wb[static_cast<std::size_t>(p3 + K)];
        }
      }
    }
    partial[ip2] = acc;
  });
  return (1.0 + static_cast<double>(jsq)) * pairwise_sum(partial);
}

// dim 2: sum over (p2,p4,p5) with the inner (p1,p3) pair collapsed onto a
// circle. Many outer triples share one circle, so the per-circle weighted
// pair sums are precomputed into a dense table keyed by (T, t), where
// T = p1+p3 and t = |p1|^2+|p3|^2.
double weighted_sum_dim2(const ModeIndex& j, std::int64_t K, double beta) {
  const std::int64_t jsq = j.norm_sq();
  const std::int64_t jsup = j.sup_norm();
  const std::int64_t Tmax = 3 * K + jsup;       // |T|_inf = |j+p2+p4-p5|_inf
  const std::int64_t tmax = jsq + 4 * K * K;    // t = |j|^2+|p2|^2+|p4|^2-|p5|^2
  const std::int64_t W = 2 * Tmax + 1;
  const std::size_t cells =
      static_cast<std::size_t>(W) * static_cast<std::size_t>(W) *
      static_cast<std::size_t>(tmax + 1);
  if (cells > std::size_t{40'000'000})
    fail("weighted_resonant_sum: dim-2 cutoff " + std::to_string(K) +
         " needs " + std::to_string(cells) + " circle-table cells; reduce K");

  const auto lattice = mode_lattice(2, K);
  const std::size_t nl = lattice.size();
  std::vector<double> wb(nl), w2(nl);
  std::vector<std::int64_t> lat_sq(nl);
  for (std::size_t i = 0; i < nl; ++i) {
    lat_sq[i] = lattice[i].norm_sq();
    const double b2 = 1.0 + static_cast<double>(lat_sq[i]);
    wb[i] = std::pow(b2, -beta);
    w2[i] = 1.0 / b2;
  }

  const std::size_t tstride = static_cast<std::size_t>(tmax + 1);
  auto key = [&](std::int64_t Tx, std::int64_t Ty, std::int64_t t) {
    return (static_cast<std::size_t>(Tx + Tmax) * static_cast<std::size_t>(W) +
            static_cast<std::size_t>(Ty + Tmax)) *
               tstride +
           static_cast<std::size_t>(t);
  };
  std::vector<double> circle(cells, 0.0);
  // Fill every potentially nonzero cell: 2t >= |T|^2 and t = |T|^2 (mod 2)
  // (a parity consequence of a = 2p1x - Tx, b = 2p1y - Ty).
  parallel_for(static_cast<std::size_t>(W), [&](std::size_t row) {
    const std::int64_t Tx = static_cast<std::int64_t>(row) - Tmax;
    for (std::int64_t Ty = -Tmax; Ty <= Tmax; ++Ty) {
      const std::int64_t Tsq = Tx * Tx + Ty * Ty;
      std::int64_t t0 = (Tsq + 1) / 2;
      if ((t0 ^ Tsq) & 1) ++t0;
      for (std::int64_t t = t0; t <= tmax; t += 2) {
        const std::int64_t disc = 2 * t - Tsq;
        double v = 0.0;
        const auto s =
            static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(disc)))) + 1;
        std::int64_t a = -s;
        if (((a ^ Tx) & 1) != 0) ++a;
        for (; a <= s; a += 2) {
          const std::int64_t rem = disc - a * a;
          std::int64_t b = 0;
          if (rem < 0 || !perfect_square(rem, b)) continue;
          if (((b ^ Ty) & 1) != 0) continue;
          const std::int64_t p1x = (Tx + a) / 2;
          if (std::abs(p1x) > K || std::abs(Tx - p1x) > K) continue;
          for (std::int64_t sb : b == 0 ? std::vector<std::int64_t>{0}
                                        : std::vector<std::int64_t>{-b, b}) {
            const std::int64_t p1y = (Ty + sb) / 2;
            if (std::abs(p1y) > K || std::abs(Ty - p1y) > K) continue;
            v += wb[mode_offset(ModeIndex::make2(p1x, p1y), K)] *
                 wb[mode_offset(ModeIndex::make2(Tx - p1x, Ty - p1y), K)];
          }
        }
        if (v != 0.0) circle[key(Tx, Ty, t)] = v;
      }
    }
  });

  // Outer triple loop, parallel over p2; per-p2 partials are combined with a
  // fixed pairwise order so the result is thread-count independent.
  std::vector<double> partial(nl, 0.0);
  parallel_for(nl, [&](std::size_t ip2) {
    const ModeIndex& p2 = lattice[ip2];
    double acc = 0.0;
    for (std::size_t ip4 = 0; ip4 < nl; ++ip4) {
      const ModeIndex& p4 = lattice[ip4];
      const std::int64_t msq = std::max({jsq, lat_sq[ip2], lat_sq[ip4]});
      const double w24 = wb[ip2] * wb[ip4];
      const ModeIndex base = j + p2 + p4;
      const std::int64_t bsq = jsq + lat_sq[ip2] + lat_sq[ip4];
      for (std::size_t ip5 = 0; ip5 < nl; ++ip5) {
        if (4 * lat_sq[ip5] < msq) continue;  // |p5| >= max(...)/2
        const std::int64_t t = bsq - lat_sq[ip5];
        if (t < 0) continue;
        const ModeIndex& p5 = lattice[ip5];
        acc += w24 * w2[ip5] *
               circle[key(base.c[0] - p5.c[0], base.c[1] - p5.c[1], t)];
      }
    }
    partial[ip2] = acc;
  });
  return (1.0 + static_cast<double>(jsq)) * pairwise_sum(partial);
}

}  // namespace

double weighted_resonant_sum(const ModeIndex& j, std::int64_t K, double beta) {
  check_cutoff(K, "weighted_resonant_sum");
  if (j.dim == 1) {
    if (!(beta > 3.0 / 8.0 && beta < 1.0))
      fail("weighted_resonant_sum: dim 1 requires beta in (3/8, 1), got " +
           std::to_string(beta));
    return weighted_sum_dim1(j.c[0], K, beta);
  }
  if (j.dim == 2) {
    if (!(beta > 7.0 / 8.0 && beta < 1.0))
      fail("weighted_resonant_sum: dim 2 requires beta in (7/8, 1), got " +
           std::to_string(beta));
    return weighted_sum_dim2(j, K, beta);
  }
  fail("weighted_resonant_sum: dim must be 1 or 2");
}

}  // namespace rqnls
