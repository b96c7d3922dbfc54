#pragma once

#include <cstdint>
#include <string>

#include "rqnls/dynamics.hpp"

namespace rqnls {

// Binary state file: magic "RQNLS1", u32 little-endian header length, UTF-8
// JSON header, then little-endian doubles interleaved (re, im), mode-major
// then x-index. Round trips bit-exactly.
inline constexpr char kCheckpointMagic[6] = {'R', 'Q', 'N', 'L', 'S', '1'};
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const SimState& s, const std::string& path);
SimState load_checkpoint(const std::string& path);

struct CylinderState {
  CylinderField field;
  double t = 0.0;
  std::int64_t step = 0;
};

// Cylinder states reuse the container with system "cylinder"; the payload is
// y-mode-major physical samples (row iy, then x).
void save_cylinder_checkpoint(const CylinderState& s, const std::string& path);
CylinderState load_cylinder_checkpoint(const std::string& path);

}  // namespace rqnls
