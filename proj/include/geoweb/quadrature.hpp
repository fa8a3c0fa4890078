#pragma once

#include <cmath>
#include <functional>

#include "geoweb/errors.hpp"

namespace geoweb {

inline constexpr int kSimpsonMaxDepth = 20;

namespace detail {

template <typename F>
double simpson_step(const F& f, double a, double fa, double m, double fm, double b, double fb,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth >= kSimpsonMaxDepth) {
    throw QuadratureFailure("adaptive Simpson did not reach tolerance in " +
                            std::to_string(kSimpsonMaxDepth) + " refinement levels on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; absolute tolerance `tol` on [a, b].
/// Throws QuadratureFailure when a panel needs more than kSimpsonMaxDepth levels.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, m, fm, b, fb, whole, tol, 0);
}

}  // namespace geoweb
