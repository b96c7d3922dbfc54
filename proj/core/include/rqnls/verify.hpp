#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rqnls/faults.hpp"

namespace rqnls {

enum class CheckKind {
  Identity,
  BoundedConstant,
  ConvergenceOrder,
  OracleEquivalence,
  Monotonicity,
};

enum class SuiteProfile { Fast, Default, Full };

struct CheckSpec {
  std::string name;
  CheckKind kind = CheckKind::Identity;
  double tolerance = 0.0;                      // unused for bounded-constant
  std::map<std::string, double> params;        // J, Nx, beta, K ladder ends, ...
  std::uint64_t seed = 0;
};

struct CheckReport {
  std::string name;
  CheckKind kind = CheckKind::Identity;
  // "pass" / "fail" for decidable checks; "reported" publishes a constant
  // with its convergence ladder and can only fail through divergence.
  std::string status;
  double measured = 0.0;  // max residual, empirical constant, observed order
  double tolerance = 0.0;
  std::vector<double> ladder;  // K ladder values for reported constants
  std::string detail;
  double elapsed_ms = 0.0;  // excluded from determinism comparisons
};

// The full catalogue (every paper identity/inequality in scope as an
// executable check), sized by profile.
std::vector<CheckSpec> builtin_suite(SuiteProfile profile, std::uint64_t seed);

// Deterministic execution in catalogue order; heavy checks parallelize
// internally with thread-count-independent reductions.
std::vector<CheckReport> run_suite(const std::vector<CheckSpec>& specs);

bool all_passed(const std::vector<CheckReport>& reports);

// JSON payload for --report; excludes wall-clock fields when strip_timing.
std::string reports_to_json(const std::vector<CheckReport>& reports,
                            bool strip_timing = false);

struct MutationOutcome {
  faults::Mutation mutation;
  std::vector<std::string> failed_checks;
};

// Runs a sensitivity subset of the suite under each canned mutation; every
// mutation must trip at least one check.
std::vector<MutationOutcome> run_mutation_matrix(std::uint64_t seed);

}  // namespace rqnls
