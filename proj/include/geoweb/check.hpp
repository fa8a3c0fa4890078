#pragma once

// Grid-level linearizability check of a 4-web given by (f, a): curvature of
// the 3-subweb, normalization to w = 1 when it is flat, the Liouville
// residuals, and optionally the family of alpha.

#include <optional>
#include <string>

#include "geoweb/fit.hpp"
#include "geoweb/invariants.hpp"

namespace geoweb {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckConfig {
  std::string f_text;
  std::string a_text;
  Rect rect;
  int grid = 32;
  double tol_K = 1e-8;
  double tol_L = 1e-8;
  double fit_threshold = 1e-6;
  bool fit = false;
  int threads = 0;  // 0: hardware concurrency, capped by GEOWEB_THREADS
};

enum class Verdict { linearizable_conditions_met, liouville_nonzero, curvature_nonzero, degenerate };

const char* to_string(Verdict v);

struct Report {
  CheckConfig config;
  double max_abs_K = 0.0;
  double max_abs_L1 = 0.0;
  double max_abs_L2 = 0.0;
  std::size_t degenerate_point_count = 0;
  Verdict verdict = Verdict::degenerate;
  bool gauge_applied = false;
  bool fit_requested = false;
  std::optional<FitResult> family_fit;  // empty with fit_requested: no family matched
  double wall_time_ms = 0.0;
};

/// Fewer valid grid points than this fraction makes the verdict `degenerate`.
inline constexpr double kMinValidFraction = 0.5;

/// Throws InputError (bad expressions, grid < 8, empty rectangle) and the
/// numerical errors of the gauge step (QuadratureFailure, SignChange).
Report run_check(const CheckConfig& config);

/// Two-space indented JSON with a fixed key order.
std::string report_json(const Report& report);

/// Worker count: `requested` if positive, else hardware concurrency, then
/// capped by the GEOWEB_THREADS environment variable when set.
int worker_count(int requested);

}  // namespace geoweb
