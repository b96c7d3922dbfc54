#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rqnls/modes.hpp"

namespace rqnls {

// Largest admissible cutoff; keeps every signed square-sum well inside
// int64 range so overflow is structurally impossible below it.
inline constexpr std::int64_t kMaxCutoff = std::int64_t{1} << 20;

// One interaction quintuple (j1,...,j5). Membership in R(j) means
//   j1 - j2 + j3 - j4 + j5 = j           (componentwise)
//   |j1|^2 - |j2|^2 + |j3|^2 - |j4|^2 + |j5|^2 = |j|^2.
struct ResonantTuple {
  std::array<ModeIndex, 5> m;

  friend bool operator==(const ResonantTuple&, const ResonantTuple&) = default;
  friend std::strong_ordering operator<=>(const ResonantTuple& a, const ResonantTuple& b) {
    for (int i = 0; i < 5; ++i)
      if (auto c = a.m[i] <=> b.m[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

// Alternating sum j1-j2+j3-j4+j5 of the tuple's indices.
ModeIndex alternating_sum(const ResonantTuple& t);
// Signed square sum |j1|^2-|j2|^2+|j3|^2-|j4|^2+|j5|^2 (fault-injection site).
std::int64_t signed_square_sum(const ResonantTuple& t);

// Exact membership test for R(j), no cutoff applied.
bool in_resonance_set(const ResonantTuple& t, const ModeIndex& j);

// Complete list of tuples in R(j) with every |j_i|_inf <= J, in lexicographic
// order. dim 1 solves the last pair from the linear/quadratic constraints
// (O((2J+1)^3)); dim 2 reduces the inner two-index search to lattice points
// on a circle. Throws if J exceeds kMaxCutoff or |j|_inf > J.
std::vector<ResonantTuple> enumerate_resonances(const ModeIndex& j, std::int64_t J);

// All sets R(j), |j|_inf <= J, keyed by canonical mode order. Immutable after
// construction; safe to share across threads.
class ResonanceTable {
 public:
  ResonanceTable(int dim, std::int64_t J);

  int dim() const { return dim_; }
  std::int64_t cutoff() const { return J_; }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  const std::vector<ResonantTuple>& tuples(const ModeIndex& j) const;
  std::size_t total_tuples() const;

 private:
  int dim_;
  std::int64_t J_;
  std::vector<ModeIndex> modes_;
  std::vector<std::vector<ResonantTuple>> per_mode_;
};

// Circle |2p - doubled_center|^2 = quadrupled_radius_sq in Z^2. Doubling the
// center and quadrupling the radius keeps half-integer circle centers in
// exact integer arithmetic.
struct CircleSpec {
  std::array<std::int64_t, 2> doubled_center{0, 0};
  std::int64_t quadrupled_radius_sq = 0;
};

// All p in Z^2 on the circle with |p| >= min_norm, lexicographic order.
std::vector<ModeIndex> circle_lattice_points(const CircleSpec& c, double min_norm);

// <j>^2 * sum over j1-j2+j3-j4+j5 = j, |j_i| <= K (no square constraint) of
// prod <j_i>^-2, via iterated 1D convolution (O(K^2)).
double elementary_sum(std::int64_t j, std::int64_t K);

// <j>^2 * sum over R(j) tuples with sup-norms <= K and
// |p5| >= (1/2) max(|j|,|p2|,|p4|) of
// <p1>^-2b <p2>^-2b <p3>^-2b <p4>^-2b <p5>^-2.
// The "comparable size" constant 1/2 is a fixed convention recorded in
// report metadata. Valid ranges: dim 1 needs beta in (3/8,1), dim 2 needs
// beta in (7/8,1).
double weighted_resonant_sum(const ModeIndex& j, std::int64_t K, double beta);

}  // namespace rqnls
