#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <vector>

namespace rqnls {

// A point of the discrete mode lattice, Z (dim 1) or Z^2 (dim 2).
struct ModeIndex {
  std::array<std::int64_t, 2> c{0, 0};
  int dim = 1;

  static ModeIndex make1(std::int64_t j) { return ModeIndex{{j, 0}, 1}; }
  static ModeIndex make2(std::int64_t jx, std::int64_t jy) { return ModeIndex{{jx, jy}, 2}; }

  std::int64_t norm_sq() const {
    std::int64_t s = c[0] * c[0];
    if (dim == 2) s += c[1] * c[1];
    return s;
  }
  std::int64_t sup_norm() const {
    std::int64_t s = c[0] < 0 ? -c[0] : c[0];
    if (dim == 2) {
      const std::int64_t a = c[1] < 0 ? -c[1] : c[1];
      if (a > s) s = a;
    }
    return s;
  }
  double euclid_norm() const { return std::sqrt(static_cast<double>(norm_sq())); }
  // Japanese bracket <j> = (1+|j|^2)^(1/2).
  double bracket() const { return std::sqrt(1.0 + static_cast<double>(norm_sq())); }

  friend ModeIndex operator+(ModeIndex a, const ModeIndex& b) {
    a.c[0] += b.c[0];
    a.c[1] += b.c[1];
    return a;
  }
  friend ModeIndex operator-(ModeIndex a, const ModeIndex& b) {
    a.c[0] -= b.c[0];
    a.c[1] -= b.c[1];
    return a;
  }
  ModeIndex operator-() const {
    ModeIndex r = *this;
    r.c[0] = -r.c[0];
    r.c[1] = -r.c[1];
    return r;
  }
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
  friend std::strong_ordering operator<=>(const ModeIndex& a, const ModeIndex& b) {
    if (auto c0 = a.c[0] <=> b.c[0]; c0 != 0) return c0;
    return a.c[1] <=> b.c[1];
  }
};

// Canonical (lexicographic) list of all modes with sup-norm <= J.
std::vector<ModeIndex> mode_lattice(int dim, std::int64_t J);

// Position of j in mode_lattice(dim, J); assumes |j|_inf <= J.
inline std::size_t mode_offset(const ModeIndex& j, std::int64_t J) {
  if (j.dim == 1) return static_cast<std::size_t>(j.c[0] + J);
  const std::int64_t w = 2 * J + 1;
  return static_cast<std::size_t>((j.c[0] + J) * w + (j.c[1] + J));
}

inline std::vector<ModeIndex> mode_lattice(int dim, std::int64_t J) {
  std::vector<ModeIndex> out;
  if (dim == 1) {
    out.reserve(static_cast<std::size_t>(2 * J + 1));
    for (std::int64_t j = -J; j <= J; ++j) out.push_back(ModeIndex::make1(j));
  } else {
    out.reserve(static_cast<std::size_t>((2 * J + 1) * (2 * J + 1)));
    for (std::int64_t a = -J; a <= J; ++a)
      for (std::int64_t b = -J; b <= J; ++b) out.push_back(ModeIndex::make2(a, b));
  }
  return out;
}

}  // namespace rqnls
