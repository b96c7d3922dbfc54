#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqnls/fields.hpp"
#include "rqnls/nonlinearity.hpp"

namespace rqnls {

enum class SystemKind { Resonant1d, Resonant2d, Cylinder };

const char* system_name(SystemKind s);

struct InitialDataSpec {
  // "gaussian", "plane-wave-modulated", "random", or "file".
  std::string type = "gaussian";
  std::vector<GaussianPacket> packets;
  double normalize_l2h1 = 0.0;  // 0 = leave amplitudes as given
  double envelope_width = 1.0;  // random profiles
  std::string path;             // checkpoint path for type == "file"
};

struct SymmetryParams {
  double x0 = 0.0;
  double xi0 = 0.0;
  double lambda = 1.0;
  double theta = 0.5;
  double tn = 0.0;
};

// Full experiment description; validated en bloc at parse time.
struct RunConfig {
  SystemKind system = SystemKind::Resonant1d;
  std::int64_t J = 0;
  std::size_t Nx = 0;
  std::size_t Ny = 0;  // cylinder only
  double L = 0.0;
  double dt = 0.0;
  double T = 0.0;
  double cadence = 0.0;  // 0: records only at 0 and T
  NonlinearityMethod method = NonlinearityMethod::Auto;
  InitialDataSpec initial;
  std::uint64_t seed = 0;
  std::string output_dir;
  double beta = 0.5;
  int threads = 0;  // 0: hardware default / RQNLS_THREADS
  bool abort_on_contamination = false;
  SymmetryParams symmetry;
  std::vector<double> lambdas;  // experiment ladders
  int approx_samples = 20;

  int dim() const { return system == SystemKind::Resonant2d ? 2 : 1; }
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& all) : std::runtime_error(all) {}
};

// Strict parse: unknown keys are errors, and every offending field is
// reported in one diagnostic.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

// Canonical serialization (sorted keys) and its FNV-1a hash; both land in
// run metadata.
std::string canonical_config_json(const RunConfig& c);
std::uint64_t config_hash(const RunConfig& c);

// Build the initial field described by the config (resonant systems).
SpectralField build_initial_field(const RunConfig& c);

}  // namespace rqnls
