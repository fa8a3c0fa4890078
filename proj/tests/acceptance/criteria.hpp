#pragma once

// The acceptance suite: ten property checks with pinned tolerances, shared
// by the acceptance test binary and `geoweb selftest`.

#include <string>
#include <vector>

namespace geoweb::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  // When set, criterion 10 drives this executable (`selftest` and two
  // `check` runs). Otherwise it runs the check pipeline in-process.
  std::string cli_path;
  // Golden report for the trivial web; compared modulo timing fields when set.
  std::string golden_path;
  // Scratch directory for criterion 10 outputs.
  std::string work_dir = ".";
};

CriterionResult weierstrass_ode();
CriterionResult degenerate_wp();
CriterionResult family_liouville();
CriterionResult proof_chain_identities();
CriterionResult riccati_branch();
CriterionResult liouville_transcription();
CriterionResult gauge_end_to_end();
CriterionResult fit_round_trip();
CriterionResult jet_engine();
CriterionResult cli_goldens(const SuiteOptions& opts);

std::vector<CriterionResult> run_all(const SuiteOptions& opts);

/// One line per criterion: "[PASS] 3 title (detail) 0.12 s".
std::string format_line(const CriterionResult& r);

/// Report text with the lines of volatile fields (wall_time_ms,
/// tool_version) removed.
std::string strip_volatile(const std::string& report);

}  // namespace geoweb::acceptance
