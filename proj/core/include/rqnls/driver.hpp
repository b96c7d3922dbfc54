#pragma once

#include <string>

#include "rqnls/config.hpp"

namespace rqnls {

struct RunOutcome {
  bool aborted = false;       // nonfinite state; abort record written
  bool contaminated = false;  // periodization flag tripped
  std::string message;
  std::string out_dir;
};

// Full simulation run: evolves the configured system and writes config copy,
// metadata.json, diagnostics.csv and final.ckpt (abort.json on aborts) into
// out_dir.
RunOutcome run_simulation(const RunConfig& cfg, const std::string& out_dir,
                          const std::string& original_config_text = "");

// Large-scale approximation ladder; writes error_table.csv plus the standard
// run files.
RunOutcome run_experiment_approx(const RunConfig& cfg, const std::string& out_dir,
                                 const std::string& original_config_text = "");

// Small-data scattering diagnostics: free-evolution Cauchy defects between
// doubling times and the L^6 accumulation profile; writes scatter_table.csv.
RunOutcome run_experiment_scatter(const RunConfig& cfg, const std::string& out_dir,
                                  const std::string& original_config_text = "");

}  // namespace rqnls
