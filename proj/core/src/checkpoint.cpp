#include "rqnls/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rqnls/config.hpp"

namespace rqnls {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; big-endian hosts need byte swaps");

using nlohmann::json;

namespace {

void write_all(std::ofstream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

struct Parsed {
  json header;
  std::vector<cplx> payload;
};

Parsed read_container(const std::string& path, const char* expect_system) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail("checkpoint: cannot open " + path);
  is.seekg(0, std::ios::end);
  const auto fsize = static_cast<std::size_t>(is.tellg());
  is.seekg(0);
  char magic[6];
  if (fsize < 10 || !is.read(magic, 6) || std::memcmp(magic, kCheckpointMagic, 6) != 0)
    fail("checkpoint: magic mismatch in " + path);
  std::uint32_t hlen = 0;
  is.read(reinterpret_cast<char*>(&hlen), 4);
  if (10 + static_cast<std::size_t>(hlen) > fsize)
    fail("checkpoint: header length disagrees with file size");
  std::string htext(hlen, '\0');
  is.read(htext.data(), hlen);
  Parsed out;
  try {
    out.header = json::parse(htext);
  } catch (const json::parse_error& e) {
    fail(std::string("checkpoint: bad JSON header: ") + e.what());
  }
  const int ver = out.header.value("format_version", -1);
  if (ver != kCheckpointVersion)
    fail("checkpoint: format version mismatch (file " + std::to_string(ver) +
         ", reader " + std::to_string(kCheckpointVersion) + ")");
  if (expect_system) {
    const std::string sys = out.header.value("system", "");
    if (sys != expect_system)
      fail("checkpoint: system '" + sys + "' does not match expected '" + expect_system + "'");
  }
  const std::size_t payload_bytes = fsize - 10 - hlen;
  if (payload_bytes % 16 != 0)
    fail("checkpoint: payload size disagrees with complex-double layout");
  out.payload.resize(payload_bytes / 16);
  is.read(reinterpret_cast<char*>(out.payload.data()),
          static_cast<std::streamsize>(payload_bytes));
  if (!is) fail("checkpoint: truncated payload in " + path);
  return out;
}

void write_container(const std::string& path, const json& header,
                     const std::vector<cplx>& payload) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail("checkpoint: cannot write " + path);
  write_all(os, kCheckpointMagic, 6);
  const std::string htext = header.dump();
  const auto hlen = static_cast<std::uint32_t>(htext.size());
  write_all(os, &hlen, 4);
  write_all(os, htext.data(), htext.size());
  write_all(os, payload.data(), payload.size() * sizeof(cplx));
  if (!os) fail("checkpoint: short write to " + path);
}

}  // namespace

void save_checkpoint(const SimState& s, const std::string& path) {
  json h;
  h["format_version"] = kCheckpointVersion;
  h["system"] = s.field.dim() == 1 ? "resonant1d" : "resonant2d";
  h["dim"] = s.field.dim();
  h["J"] = s.field.cutoff();
  h["Nx"] = s.field.grid().Nx;
  h["L"] = s.field.grid().L;
  h["t"] = s.t;
  h["step"] = s.step;
  h["mode_order"] = "lex";
  h["fft_norm"] = "unitary";
  h["endianness"] = "LE";
  write_container(path, h, s.field.values());
}

SimState load_checkpoint(const std::string& path) {
  Parsed p = read_container(path, nullptr);
  const std::string sys = p.header.value("system", "");
  if (sys != "resonant1d" && sys != "resonant2d")
    fail("checkpoint: expected a resonant-system state, found system '" + sys + "'");
  SimState s;
  const int dim = p.header.at("dim").get<int>();
  const auto J = p.header.at("J").get<std::int64_t>();
  const Grid1D g(p.header.at("L").get<double>(), p.header.at("Nx").get<std::size_t>());
  s.field = SpectralField(dim, J, g);
  if (p.payload.size() != s.field.values().size())
    fail("checkpoint: payload size disagrees with header shape");
  s.field.values() = std::move(p.payload);
  s.t = p.header.at("t").get<double>();
  s.step = p.header.value("step", std::int64_t{0});
  return s;
}

void save_cylinder_checkpoint(const CylinderState& s, const std::string& path) {
  json h;
  h["format_version"] = kCheckpointVersion;
  h["system"] = "cylinder";
  h["dim"] = 1;
  h["J"] = 0;
  h["Nx"] = s.field.grid_x().Nx;
  h["Ny"] = s.field.Ny();
  h["L"] = s.field.grid_x().L;
  h["t"] = s.t;
  h["step"] = s.step;
  h["mode_order"] = "lex";
  h["fft_norm"] = "unitary";
  h["endianness"] = "LE";
  h["layout"] = "y-major-physical";
  // y-mode-major: row iy holds samples over x.
  const std::size_t nx = s.field.grid_x().Nx, ny = s.field.Ny();
  std::vector<cplx> payload(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) payload[iy * nx + ix] = s.field.at(ix, iy);
  write_container(path, h, payload);
}

CylinderState load_cylinder_checkpoint(const std::string& path) {
  Parsed p = read_container(path, "cylinder");
  CylinderState s;
  const Grid1D g(p.header.at("L").get<double>(), p.header.at("Nx").get<std::size_t>());
  const auto ny = p.header.at("Ny").get<std::size_t>();
  s.field = CylinderField(g, ny);
  if (p.payload.size() != g.Nx * ny)
    fail("checkpoint: payload size disagrees with header shape");
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < g.Nx; ++ix) s.field.at(ix, iy) = p.payload[iy * g.Nx + ix];
  s.t = p.header.at("t").get<double>();
  s.step = p.header.value("step", std::int64_t{0});
  return s;
}

}  // namespace rqnls
