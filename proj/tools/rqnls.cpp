// rqnls: spectral toolkit for quintic resonant Schrodinger systems on R x Z,
// R x Z^2, and the full quintic NLS on the cylinder R x T.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 runtime abort.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rqnls/checkpoint.hpp"
#include "rqnls/driver.hpp"
#include "rqnls/verify.hpp"

namespace fs = std::filesystem;
using namespace rqnls;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int do_simulate(const std::string& config_path, const std::string& system_override,
                const std::string& out_dir) {
  RunConfig cfg = parse_config(config_path);
  if (!system_override.empty()) {
    if (system_override == "resonant1d")
      cfg.system = SystemKind::Resonant1d;
    else if (system_override == "resonant2d")
      cfg.system = SystemKind::Resonant2d;
    else if (system_override == "cylinder")
      cfg.system = SystemKind::Cylinder;
    else {
      std::cerr << "unknown system: " << system_override << "\n";
      return 2;
    }
  }
  const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
  if (out.empty()) {
    std::cerr << "simulate: no output directory (--out or config output_dir)\n";
    return 2;
  }
  const RunOutcome res = run_simulation(cfg, out, slurp(config_path));
  if (res.contaminated)
    std::cerr << "warning: run flagged domain-contaminated (mass outside |x| <= L/2)\n";
  if (res.aborted) {
    std::cerr << "run aborted: " << res.message << "\n"
              << "abort record: " << (fs::path(out) / "abort.json").string() << "\n";
    return 3;
  }
  std::cout << "outputs written to " << out << "\n";
  return 0;
}

int do_verify(const std::string& suite, std::uint64_t seed, const std::string& report_path,
              bool with_mutations) {
  SuiteProfile profile = SuiteProfile::Default;
  if (suite == "fast")
    profile = SuiteProfile::Fast;
  else if (suite == "full")
    profile = SuiteProfile::Full;
  else if (suite != "default") {
    std::cerr << "unknown suite: " << suite << " (expected default|fast|full)\n";
    return 2;
  }
  const auto specs = builtin_suite(profile, seed);
  const auto reports = run_suite(specs);
  for (const auto& r : reports)
    std::cout << (r.status == "fail" ? "FAIL " : (r.status == "reported" ? "REPT " : "PASS "))
              << r.name << "  measured=" << r.measured
              << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
  bool ok = all_passed(reports);
  if (with_mutations) {
    for (const auto& mo : run_mutation_matrix(seed)) {
      const bool tripped = !mo.failed_checks.empty();
      std::cout << (tripped ? "PASS " : "FAIL ") << "mutation:" << faults::name(mo.mutation)
                << "  tripped " << mo.failed_checks.size() << " check(s)\n";
      ok = ok && tripped;
    }
  }
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    os << reports_to_json(reports);
  }
  return ok ? 0 : 1;
}

int do_resonances(int dim, std::vector<std::int64_t> jj, std::int64_t J,
                  const std::string& format) {
  ModeIndex j;
  j.dim = dim;
  if (jj.size() != static_cast<std::size_t>(dim)) {
    std::cerr << "--j needs exactly " << dim << " integer(s)\n";
    return 2;
  }
  for (std::size_t d = 0; d < jj.size(); ++d) j.c[d] = jj[d];
  const auto tuples = enumerate_resonances(j, J);
  for (const auto& t : tuples) {
    if (format == "json") {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& m : t.m)
        row.push_back(dim == 1 ? nlohmann::json(m.c[0])
                               : nlohmann::json::array({m.c[0], m.c[1]}));
      std::cout << row.dump() << "\n";
    } else {
      bool first = true;
      for (const auto& m : t.m)
        for (int d = 0; d < dim; ++d) {
          std::cout << (first ? "" : ",") << m.c[static_cast<std::size_t>(d)];
          first = false;
        }
      std::cout << "\n";
    }
  }
  std::cerr << tuples.size() << " tuple(s)\n";
  return 0;
}

int do_bench(std::vector<std::int64_t> Js, std::size_t Nx, int dim) {
  std::cout << "J,t_direct_ms,t_fft_ms,fft_faster\n";
  bool crossed = false;
  for (std::int64_t J : Js) {
    const Grid1D g(10.0, Nx);
    const auto u = random_field(dim, J, g, 7);
    const auto& table = shared_table(dim, J);
    auto time_one = [](auto&& fn) {
      const auto t0 = std::chrono::steady_clock::now();
      fn();
      return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
    };
    // Warm plans/tables, then time.
    (void)eval_F_direct(u, table);
    (void)eval_F_fft(u);
    const double td = time_one([&] { (void)eval_F_direct(u, table); });
    const double tf = time_one([&] { (void)eval_F_fft(u); });
    const bool fft_faster = tf < td;
    if (fft_faster && !crossed) crossed = true;
    std::cout << J << ',' << td << ',' << tf << ',' << (fft_faster ? 1 : 0) << "\n";
  }
  return 0;
}

int do_experiment(const std::string& which, const std::string& config_path,
                  const std::string& out_dir, const std::vector<double>& lambdas) {
  RunConfig cfg = parse_config(config_path);
  if (!lambdas.empty()) cfg.lambdas = lambdas;
  const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
  if (out.empty()) {
    std::cerr << "experiment: no output directory (--out or config output_dir)\n";
    return 2;
  }
  const RunOutcome res = which == "approx"
                             ? run_experiment_approx(cfg, out, slurp(config_path))
                             : run_experiment_scatter(cfg, out, slurp(config_path));
  if (res.aborted) {
    std::cerr << "experiment aborted: " << res.message << "\n";
    return 3;
  }
  std::cout << "outputs written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rqnls: resonant quintic NLS spectral toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: hardware, or RQNLS_THREADS)");

  auto* sim = app.add_subcommand("simulate", "evolve a configured system");
  std::string sim_config, sim_system, sim_out;
  sim->add_option("--config", sim_config, "JSON run config")->required();
  sim->add_option("--system", sim_system, "resonant1d|resonant2d|cylinder (overrides config)");
  sim->add_option("--out", sim_out, "output directory");

  auto* ver = app.add_subcommand("verify", "run the identity/oracle check suite");
  std::string suite = "default", report_path;
  std::uint64_t seed = 1;
  bool with_mutations = false;
  ver->add_option("--suite", suite, "default|fast|full");
  ver->add_option("--seed", seed, "suite seed");
  ver->add_option("--report", report_path, "write JSON report here");
  ver->add_flag("--mutations", with_mutations, "also run the mutation-sensitivity matrix");

  auto* res = app.add_subcommand("resonances", "enumerate R(j) tuples");
  int res_dim = 1;
  std::vector<std::int64_t> res_j;
  std::int64_t res_J = 0;
  std::string res_format = "csv";
  res->add_option("--dim", res_dim, "1 or 2")->check(CLI::IsMember({1, 2}));
  res->add_option("--j", res_j, "output mode (1 or 2 integers)")->required();
  res->add_option("--cutoff", res_J, "sup-norm cutoff J")->required();
  res->add_option("--format", res_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  auto* bench = app.add_subcommand("bench-nonlinearity", "direct vs FFT-lift timing");
  std::vector<std::int64_t> bench_J{1, 2, 3, 4, 6, 8, 12, 16};
  std::size_t bench_Nx = 64;
  int bench_dim = 1;
  bench->add_option("--J", bench_J, "cutoff list");
  bench->add_option("--Nx", bench_Nx, "grid points");
  bench->add_option("--dim", bench_dim, "1 or 2")->check(CLI::IsMember({1, 2}));

  auto* exp = app.add_subcommand("experiment", "desk-scale experiments");
  exp->require_subcommand(1);
  auto* approx = exp->add_subcommand("approx", "large-scale approximation ladder");
  auto* scatter = exp->add_subcommand("scatter", "small-data scattering diagnostics");
  std::string exp_config, exp_out;
  std::vector<double> exp_lambdas;
  for (auto* sub : {approx, scatter}) {
    sub->add_option("--config", exp_config, "JSON run config")->required();
    sub->add_option("--out", exp_out, "output directory");
  }
  approx->add_option("--lambda", exp_lambdas, "scale ladder (powers of two)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*sim) return do_simulate(sim_config, sim_system, sim_out);
    if (*ver) return do_verify(suite, seed, report_path, with_mutations);
    if (*res) return do_resonances(res_dim, res_j, res_J, res_format);
    if (*bench) return do_bench(bench_J, bench_Nx, bench_dim);
    if (*exp) {
      if (*approx) return do_experiment("approx", exp_config, exp_out, exp_lambdas);
      return do_experiment("scatter", exp_config, exp_out, exp_lambdas);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
