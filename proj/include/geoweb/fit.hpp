#pragma once

// Classification of a sampled alpha field into one of the four families by
// damped Gauss-Newton (Levenberg-Marquardt) least squares.

#include <optional>
#include <span>
#include <vector>

#include "geoweb/families.hpp"

namespace geoweb {

struct AlphaSample {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;
};

struct FitResult {
  FamilySpec family;
  double rms_residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct FitOptions {
  double threshold = 1e-6;  // rms below which a fit counts as a match
  int max_iterations = 200;
  double step_tol = 1e-12;
};

inline constexpr std::size_t kMinAlphaSamples = 8;

/// Least-squares fit of one family. The fitted parameters are canonical:
/// k > 0 for t2/t3 and, for t3, C reduced to the period nearest zero.
/// Never throws NoConvergence; a failed fit comes back with converged = false.
/// Throws InsufficientSamples / InputError on bad samples.
FitResult fit_family(std::span<const AlphaSample> samples, FamilyTag target, const FitOptions& opts = {});

/// Tries t4, t2, t3, t1 in that order and returns the first fit with
/// rms < threshold, otherwise the best one.
FitResult fit_auto(std::span<const AlphaSample> samples, const FitOptions& opts = {});

/// fit_auto, or nullopt ("none") when even the best fit misses the threshold.
std::optional<FitResult> classify(std::span<const AlphaSample> samples, double threshold = 1e-6);

/// Representative of the parameter symmetries that leave alpha unchanged:
/// k -> |k| for t2/t3, and for t3 C reduced modulo 2 pi / k to the value
/// nearest zero.
FamilySpec canonical_parameters(FamilySpec fam);

/// t1 with |g2|, |g3| below 1e-6: P is then 1/z^2 and the fitted field is
/// rational, the case where t1 and t4 may describe the same samples.
bool degenerate_lattice(const FamilySpec& fam);

/// True when alpha depends on x - y only: samples sharing x - y agree to `tol`.
bool collapses_to_difference(std::span<const AlphaSample> samples, double tol = 1e-6);

/// Root-mean-square of model - sample over all samples; +inf if the model is
/// singular at any sample.
double rms_residual(const FamilySpec& fam, std::span<const AlphaSample> samples);

}  // namespace geoweb
