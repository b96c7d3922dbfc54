#include "rqnls/config.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rqnls {

using nlohmann::json;

const char* system_name(SystemKind s) {
  switch (s) {
    case SystemKind::Resonant1d: return "resonant1d";
    case SystemKind::Resonant2d: return "resonant2d";
    case SystemKind::Cylinder: return "cylinder";
  }
  return "resonant1d";
}

namespace {

bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

bool is_pow2_double(double v) {
  if (!(v > 0.0)) return false;
  int e = 0;
  return std::frexp(v, &e) == 0.5;
}

struct Collector {
  std::vector<std::string> errors;
  void add(const std::string& e) { errors.push_back(e); }
  void require_keys(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.count(it.key())) add(where + ": unknown key '" + it.key() + "'");
  }
};

GaussianPacket parse_packet(const json& j, int dim, std::int64_t J, Collector& errs,
                            const std::string& where) {
  GaussianPacket p;
  errs.require_keys(j, where, {"mode", "amplitude", "width", "center", "velocity"});
  if (!j.contains("mode") || !j["mode"].is_array() ||
      j["mode"].size() != static_cast<std::size_t>(dim)) {
    errs.add(where + ": 'mode' must be an array of " + std::to_string(dim) + " integer(s)");
  } else {
    p.mode.dim = dim;
    for (int d = 0; d < dim; ++d) p.mode.c[static_cast<std::size_t>(d)] = j["mode"][static_cast<std::size_t>(d)].get<std::int64_t>();
    if (p.mode.sup_norm() > J) errs.add(where + ": mode exceeds cutoff J");
  }
  p.amplitude = j.value("amplitude", 1.0);
  p.width = j.value("width", 1.0);
  p.center = j.value("center", 0.0);
  p.velocity = j.value("velocity", 0.0);
  if (!(p.width > 0.0)) errs.add(where + ": width must be positive");
  return p;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Collector errs;
  RunConfig c;
  errs.require_keys(j, "config",
                    {"system", "J", "Nx", "Ny", "L", "dt", "T", "cadence", "method",
                     "initial_data", "seed", "output_dir", "beta", "threads",
                     "abort_on_contamination", "symmetry", "lambdas", "approx_samples"});

  const std::string sys = j.value("system", "");
  if (sys == "resonant1d")
    c.system = SystemKind::Resonant1d;
  else if (sys == "resonant2d")
    c.system = SystemKind::Resonant2d;
  else if (sys == "cylinder")
    c.system = SystemKind::Cylinder;
  else
    errs.add("system: must be one of resonant1d, resonant2d, cylinder");

  c.J = j.value("J", std::int64_t{0});
  if (c.system != SystemKind::Cylinder) {
    if (c.J < 0 || c.J > kMaxCutoff) errs.add("J: must lie in [0, 2^20]");
  }
  c.Nx = j.value("Nx", std::size_t{0});
  if (!is_pow2(c.Nx)) errs.add("Nx: must be a power of two");
  if (c.system == SystemKind::Cylinder) {
    c.Ny = j.value("Ny", std::size_t{0});
    if (!is_pow2(c.Ny)) errs.add("Ny: must be a power of two");
  } else if (j.contains("Ny")) {
    errs.add("Ny: only valid for the cylinder system");
  }
  c.L = j.value("L", 0.0);
  if (!(c.L > 0.0)) errs.add("L: must be positive");
  c.dt = j.value("dt", 0.0);
  if (!(c.dt > 0.0)) errs.add("dt must be positive");
  c.T = j.value("T", 0.0);
  if (!(c.T >= 0.0)) errs.add("T: must be nonnegative");
  c.cadence = j.value("cadence", 0.0);
  if (c.cadence < 0.0) errs.add("cadence: must be nonnegative");
  if (c.cadence > 0.0 && c.dt > 0.0) {
    const double k = c.cadence / c.dt;
    if (std::fabs(k - std::llround(k)) > 1e-9)
      errs.add("cadence: dt must divide the cadence");
  }

  const std::string method = j.value("method", "auto");
  if (method == "direct")
    c.method = NonlinearityMethod::DirectEnumeration;
  else if (method == "fft")
    c.method = NonlinearityMethod::FftLift;
  else if (method == "auto")
    c.method = NonlinearityMethod::Auto;
  else
    errs.add("method: must be one of direct, fft, auto");

  if (j.contains("initial_data")) {
    const json& id = j["initial_data"];
    errs.require_keys(id, "initial_data",
                      {"type", "packets", "normalize_l2h1", "envelope_width", "path"});
    c.initial.type = id.value("type", "gaussian");
    if (c.initial.type != "gaussian" && c.initial.type != "plane-wave-modulated" &&
        c.initial.type != "random" && c.initial.type != "file")
      errs.add("initial_data.type: must be gaussian, plane-wave-modulated, random, or file");
    c.initial.normalize_l2h1 = id.value("normalize_l2h1", 0.0);
    c.initial.envelope_width = id.value("envelope_width", 1.0);
    c.initial.path = id.value("path", "");
    if (c.initial.type == "file" && c.initial.path.empty())
      errs.add("initial_data.path: required for type 'file'");
    if (id.contains("packets")) {
      std::size_t k = 0;
      for (const auto& pj : id["packets"]) {
        c.initial.packets.push_back(parse_packet(
            pj, c.dim(), c.J, errs, "initial_data.packets[" + std::to_string(k) + "]"));
        ++k;
      }
    }
    if ((c.initial.type == "gaussian" || c.initial.type == "plane-wave-modulated") &&
        c.initial.packets.empty())
      errs.add("initial_data.packets: at least one packet required");
  } else {
    errs.add("initial_data: required");
  }

  c.seed = j.value("seed", std::uint64_t{0});
  c.output_dir = j.value("output_dir", "");
  c.beta = j.value("beta", 0.5);
  if (!(c.beta > 0.0 && c.beta < 1.0)) errs.add("beta: must lie in (0,1)");
  c.threads = j.value("threads", 0);
  if (c.threads < 0) errs.add("threads: must be nonnegative");
  c.abort_on_contamination = j.value("abort_on_contamination", false);

  if (j.contains("symmetry")) {
    const json& s = j["symmetry"];
    errs.require_keys(s, "symmetry", {"x0", "xi0", "lambda", "theta", "tn"});
    c.symmetry.x0 = s.value("x0", 0.0);
    c.symmetry.xi0 = s.value("xi0", 0.0);
    c.symmetry.lambda = s.value("lambda", 1.0);
    c.symmetry.theta = s.value("theta", 0.5);
    c.symmetry.tn = s.value("tn", 0.0);
    if (!is_pow2_double(c.symmetry.lambda))
      errs.add("symmetry.lambda: not a power of two (grid-compatibility rule)");
    if (!(c.symmetry.theta > 0.0 && c.symmetry.theta < 1.0))
      errs.add("symmetry.theta: must lie in (0,1)");
  }
  if (j.contains("lambdas")) {
    for (const auto& lv : j["lambdas"]) {
      const double l = lv.get<double>();
      if (!is_pow2_double(l))
        errs.add("lambdas: " + std::to_string(l) +
                 " is not a power of two (grid-compatibility rule)");
      c.lambdas.push_back(l);
    }
  }
  c.approx_samples = j.value("approx_samples", 20);
  if (c.approx_samples < 1) errs.add("approx_samples: must be positive");

  if (!errs.errors.empty()) {
    std::ostringstream os;
    os << "invalid config (" << errs.errors.size() << " problem(s)):";
    for (const auto& e : errs.errors) os << "\n  - " << e;
    throw ConfigError(os.str());
  }
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config file not found: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_config_json(const RunConfig& c) {
  json j;  // nlohmann objects keep keys sorted
  j["system"] = system_name(c.system);
  j["J"] = c.J;
  j["Nx"] = c.Nx;
  if (c.system == SystemKind::Cylinder) j["Ny"] = c.Ny;
  j["L"] = c.L;
  j["dt"] = c.dt;
  j["T"] = c.T;
  j["cadence"] = c.cadence;
  j["method"] = c.method == NonlinearityMethod::DirectEnumeration ? "direct"
                : c.method == NonlinearityMethod::FftLift         ? "fft"
                                                                  : "auto";
  json id;
  id["type"] = c.initial.type;
  id["normalize_l2h1"] = c.initial.normalize_l2h1;
  id["envelope_width"] = c.initial.envelope_width;
  if (!c.initial.path.empty()) id["path"] = c.initial.path;
  json packets = json::array();
  for (const auto& p : c.initial.packets) {
    json pj;
    pj["mode"] = p.mode.dim == 1 ? json::array({p.mode.c[0]})
                                 : json::array({p.mode.c[0], p.mode.c[1]});
    pj["amplitude"] = p.amplitude;
    pj["width"] = p.width;
    pj["center"] = p.center;
    pj["velocity"] = p.velocity;
    packets.push_back(pj);
  }
  id["packets"] = packets;
  j["initial_data"] = id;
  j["seed"] = c.seed;
  j["beta"] = c.beta;
  j["abort_on_contamination"] = c.abort_on_contamination;
  json s;
  s["x0"] = c.symmetry.x0;
  s["xi0"] = c.symmetry.xi0;
  s["lambda"] = c.symmetry.lambda;
  s["theta"] = c.symmetry.theta;
  s["tn"] = c.symmetry.tn;
  j["symmetry"] = s;
  j["lambdas"] = c.lambdas;
  j["approx_samples"] = c.approx_samples;
  return j.dump();
}

std::uint64_t config_hash(const RunConfig& c) {
  const std::string s = canonical_config_json(c);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

SpectralField build_initial_field(const RunConfig& c) {
  const Grid1D g(c.L, c.Nx);
  const int dim = c.dim();
  SpectralField u;
  if (c.initial.type == "random") {
    u = random_field(dim, c.J, g, c.seed, c.initial.envelope_width);
  } else if (c.initial.type == "file") {
    fail("build_initial_field: file-backed data is loaded by the driver");
  } else {
    u = packet_field(dim, c.J, g, c.initial.packets);
  }
  if (c.initial.normalize_l2h1 > 0.0) u = normalized_l2h1(std::move(u), c.initial.normalize_l2h1);
  return u;
}

}  // namespace rqnls
