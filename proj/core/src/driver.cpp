#include "rqnls/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rqnls/checkpoint.hpp"
#include "rqnls/diagnostics.hpp"
#include "rqnls/dynamics.hpp"

namespace rqnls {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  if (!os) fail("cannot write " + p.string());
  os << text;
}

json base_metadata(const RunConfig& cfg) {
  json m;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  m["config_hash_fnv1a"] = hash;
  m["system"] = system_name(cfg.system);
  m["mode_order"] = "lex";
  m["fft_norm"] = "unitary";
  m["lowpass_bump"] = "1 on |r|<=1, exp(1-1/(1-(|r|-1)^2)) on 1<|r|<2, 0 on |r|>=2";
  m["weighted_sum_comparable_constant"] = 0.5;
  m["seed"] = cfg.seed;
  m["threads"] = thread_count();
#if defined(__clang__)
  m["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  m["compiler"] = std::string("gcc ") + std::to_string(__GNUC__) + "." +
                  std::to_string(__GNUC_MINOR__);
#endif
  return m;
}

void prepare_dir(const std::string& out_dir, const RunConfig& cfg,
                 const std::string& original_text) {
  fs::create_directories(out_dir);
  write_text(fs::path(out_dir) / "config.json",
             original_text.empty() ? canonical_config_json(cfg) : original_text);
}

std::string resolved_method_name(const RunConfig& cfg) {
  NonlinearityMethod m = cfg.method;
  if (m == NonlinearityMethod::Auto) m = resolve_auto(cfg.dim(), cfg.J, cfg.Nx);
  return m == NonlinearityMethod::DirectEnumeration ? "direct" : "fft";
}

CylinderField build_initial_cylinder(const RunConfig& cfg) {
  const Grid1D g(cfg.L, cfg.Nx);
  CylinderField u(g, cfg.Ny);
  if (cfg.initial.type == "random") {
    GaussianStream rng(cfg.seed);
    const auto jmax = static_cast<std::int64_t>(cfg.Ny / 4);
    const double w2 = 2.0 * cfg.initial.envelope_width * cfg.initial.envelope_width;
    for (std::int64_t j = -jmax; j <= jmax; ++j) {
      const cplx amp = rng.next_complex() / (1.0 + static_cast<double>(j * j));
      for (std::size_t ix = 0; ix < g.Nx; ++ix) {
        const double x = g.x(ix);
        const cplx ax = amp * std::exp(-x * x / w2);
        for (std::size_t iy = 0; iy < cfg.Ny; ++iy) {
          const double ph = static_cast<double>(j) * u.y(iy);
          u.at(ix, iy) += ax * cplx(std::cos(ph), std::sin(ph));
        }
      }
    }
  } else {
    for (const auto& p : cfg.initial.packets) {
      const auto j = p.mode.c[0];
      const double w2 = 2.0 * p.width * p.width;
      for (std::size_t ix = 0; ix < g.Nx; ++ix) {
        const double x = g.x(ix) - p.center;
        const cplx ax = p.amplitude * std::exp(-x * x / w2) *
                        cplx(std::cos(p.velocity * g.x(ix)), std::sin(p.velocity * g.x(ix)));
        for (std::size_t iy = 0; iy < cfg.Ny; ++iy) {
          const double ph = static_cast<double>(j) * u.y(iy);
          u.at(ix, iy) += ax * cplx(std::cos(ph), std::sin(ph));
        }
      }
    }
  }
  return u;
}

}  // namespace

RunOutcome run_simulation(const RunConfig& cfg, const std::string& out_dir,
                          const std::string& original_text) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  RunOutcome out;
  out.out_dir = out_dir;
  prepare_dir(out_dir, cfg, original_text);
  json meta = base_metadata(cfg);

  if (cfg.system == SystemKind::Cylinder) {
    CylinderState st;
    if (cfg.initial.type == "file")
      st = load_cylinder_checkpoint(cfg.initial.path);
    else
      st.field = build_initial_cylinder(cfg);
    CylinderTrajectory traj;
    try {
      traj = cylinder_evolve(std::move(st.field), cfg.T, cfg.dt, cfg.cadence);
    } catch (const std::exception& e) {
      out.aborted = true;
      out.message = e.what();
    }
    write_csv((fs::path(out_dir) / "diagnostics.csv").string(), traj.records);
    out.aborted = out.aborted || traj.aborted;
    if (traj.aborted) out.message = traj.abort_message;
    meta["aborted"] = out.aborted;
    if (traj.aborted) meta["abort_step"] = traj.abort_step;
    if (!out.aborted) {
      CylinderState fin{std::move(traj.final_field), st.t + traj.final_t,
                        st.step + static_cast<std::int64_t>(std::llround(traj.final_t / cfg.dt))};
      save_cylinder_checkpoint(fin, (fs::path(out_dir) / "final.ckpt").string());
    } else {
      write_text(fs::path(out_dir) / "abort.json",
                 json{{"step", traj.abort_step}, {"message", traj.abort_message}}.dump(2));
    }
    write_text(fs::path(out_dir) / "metadata.json", meta.dump(2));
    return out;
  }

  SimState st;
  if (cfg.initial.type == "file")
    st = load_checkpoint(cfg.initial.path);
  else
    st.field = build_initial_field(cfg);

  const double sup_h1 = norm(st.field, NormSpec{NormSpec::p_infinity, 1.0});
  const double dt_heuristic = 0.1 / std::max(1e-12, std::pow(sup_h1, 4.0));
  meta["dt_stability_heuristic"] = dt_heuristic;
  meta["method_resolved"] = resolved_method_name(cfg);

  EvolveOptions opt;
  opt.cadence = cfg.cadence;
  opt.method = cfg.method;
  opt.beta = cfg.beta;
  opt.abort_on_contamination = cfg.abort_on_contamination;
  Trajectory traj = evolve(st, cfg.T, cfg.dt, opt);

  write_csv((fs::path(out_dir) / "diagnostics.csv").string(), traj.records);
  out.aborted = traj.aborted;
  out.contaminated = traj.contaminated;
  if (traj.aborted) out.message = traj.abort_message;
  meta["aborted"] = traj.aborted;
  meta["domain_contaminated"] = traj.contaminated;
  if (traj.aborted) {
    meta["abort_step"] = traj.abort_step;
    write_text(fs::path(out_dir) / "abort.json",
               json{{"step", traj.abort_step}, {"message", traj.abort_message}}.dump(2));
  } else {
    save_checkpoint(traj.final_state, (fs::path(out_dir) / "final.ckpt").string());
  }
  write_text(fs::path(out_dir) / "metadata.json", meta.dump(2));
  return out;
}

RunOutcome run_experiment_approx(const RunConfig& cfg, const std::string& out_dir,
                                 const std::string& original_text) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  RunOutcome out;
  out.out_dir = out_dir;
  if (cfg.Ny == 0) fail("experiment approx: Ny (cylinder y points) is required");
  prepare_dir(out_dir, cfg, original_text);

  const SpectralField phi = build_initial_field(cfg);
  ApproxConfig ac;
  ac.lambdas = cfg.lambdas.empty() ? std::vector<double>{4.0, 8.0, 16.0} : cfg.lambdas;
  ac.theta = cfg.symmetry.theta;
  ac.xi0 = cfg.symmetry.xi0;
  ac.x0 = cfg.symmetry.x0;
  ac.tn = cfg.symmetry.tn;
  ac.Ny = cfg.Ny;
  ac.T = cfg.T;
  ac.dt = cfg.dt;
  ac.n_samples = cfg.approx_samples;
  ac.method = cfg.method;
  const auto rows = approximation_experiment(phi, ac);

  std::ofstream os(fs::path(out_dir) / "error_table.csv");
  os << "lambda,sup_rel_error,t_at_sup,projection_error,initial_gap\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.lambda << ',' << r.sup_rel_error << ',' << r.t_at_sup << ','
       << r.projection_error << ',' << r.initial_gap << '\n';

  json meta = base_metadata(cfg);
  meta["experiment"] = "approx";
  meta["theta"] = cfg.symmetry.theta;
  meta["tn_surrogate"] =
      "finite tn with free-evolution data matching at tau = tn (tn = 0 exact branch)";
  write_text(fs::path(out_dir) / "metadata.json", meta.dump(2));
  return out;
}

RunOutcome run_experiment_scatter(const RunConfig& cfg, const std::string& out_dir,
                                  const std::string& original_text) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  RunOutcome out;
  out.out_dir = out_dir;
  if (cfg.system == SystemKind::Cylinder) fail("experiment scatter: resonant systems only");
  prepare_dir(out_dir, cfg, original_text);

  SimState st;
  st.field = build_initial_field(cfg);
  // Snapshot the pullbacks at T/8, T/4, T/2, T for the doubling-time gaps.
  std::vector<double> marks = {cfg.T / 8.0, cfg.T / 4.0, cfg.T / 2.0, cfg.T};
  std::vector<SimState> snaps;
  EvolveOptions opt;
  opt.cadence = cfg.cadence > 0.0 ? cfg.cadence : cfg.T / 8.0;
  opt.method = cfg.method;
  opt.beta = cfg.beta;
  opt.snapshot_hook = [&](const SimState& s) {
    for (double m : marks)
      if (std::fabs(s.t - m) < 0.25 * cfg.dt) snaps.push_back(s);
  };
  Trajectory traj = evolve(st, cfg.T, cfg.dt, opt);
  write_csv((fs::path(out_dir) / "diagnostics.csv").string(), traj.records);

  std::ofstream os(fs::path(out_dir) / "scatter_table.csv");
  os << "t1,t2,cauchy_defect\n";
  os.precision(17);
  std::vector<double> defects;
  for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
    const double d = scattering_cauchy_defect(snaps[i].field, snaps[i].t,
                                              snaps[i + 1].field, snaps[i + 1].t);
    defects.push_back(d);
    os << snaps[i].t << ',' << snaps[i + 1].t << ',' << d << '\n';
  }

  json meta = base_metadata(cfg);
  meta["experiment"] = "scatter";
  meta["aborted"] = traj.aborted;
  if (!traj.records.empty()) {
    meta["l6_hbeta_total"] = traj.records.back().l6_hbeta_accum;
    // Last-quarter increment of the L^6 accumulation (saturation indicator).
    const double total6 = std::pow(traj.records.back().l6_hbeta_accum, 6.0);
    double at_three_quarters = 0.0;
    for (const auto& r : traj.records)
      if (r.t <= 0.75 * cfg.T) at_three_quarters = std::pow(r.l6_hbeta_accum, 6.0);
    meta["l6_last_quarter_fraction"] =
        total6 > 0.0 ? (total6 - at_three_quarters) / total6 : 0.0;
  }
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < defects.size(); ++i)
    if (defects[i + 1] >= defects[i]) decreasing = false;
  meta["defect_decreasing"] = decreasing;
  write_text(fs::path(out_dir) / "metadata.json", meta.dump(2));
  if (!traj.aborted) save_checkpoint(traj.final_state, (fs::path(out_dir) / "final.ckpt").string());
  out.aborted = traj.aborted;
  return out;
}

}  // namespace rqnls
