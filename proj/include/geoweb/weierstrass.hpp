#pragma once

// Weierstrass elliptic function P(z; g2, g3) and its derivative for real
// arguments and real invariants, over plain doubles or Jet1 scalars.
//
// Evaluation: halve z until it lies inside the reduction radius, sum the
// Laurent series there, then double back up. Both P and P' are carried
// through the doubling steps:
//   m       = P''/P' = (6P^2 - g2/2) / P'
//   P(2z)   = m^2/4 - 2P
//   P'(2z)  = m (12P - m^2) / 4 - P'
// The second line is the z-derivative of the first (using P''' = 12 P P'),
// so no square root of the cubic is ever taken.

#include <array>
#include <cmath>
#include <string>

#include "geoweb/errors.hpp"
#include "geoweb/jet.hpp"

namespace geoweb {

struct WpParams {
  double g2 = 0.0;
  double g3 = 0.0;
};

/// Highest Laurent index k kept in P(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}.
inline constexpr int kWpSeriesTerms = 12;
/// |z| below this is treated as sitting on the pole at the origin.
inline constexpr double kWpPoleEpsilon = 1e-8;
/// Any intermediate |P| above this is reported as pole proximity.
inline constexpr double kWpMaxMagnitude = 1e12;
/// Doubling divides by P'; below this it is reported as a half-period hit.
inline constexpr double kWpHalfPeriodGuard = 1e-10;

/// c_0..c_terms with c_0 = c_1 = 0, c_2 = g2/20, c_3 = g3/28 and the standard
/// convolution recursion for k >= 4.
std::array<double, kWpSeriesTerms + 1> wp_laurent_coefficients(WpParams p);

/// 0.5 * min(1, |g2|^{-1/4}, |g3|^{-1/6}); a guard only applies when the invariant is nonzero.
double wp_reduction_radius(WpParams p);

/// Smallest n with |z| / 2^n <= wp_reduction_radius(p).
int wp_halving_count(double z_abs, WpParams p);

template <typename T>
struct WpPair {
  T wp;
  T dwp;
};

/// Same as wp_pair but with an explicit number of halvings (n must be at
/// least wp_halving_count for the series to be accurate).
template <typename T>
WpPair<T> wp_pair_with_halvings(const T& z, WpParams p, int halvings) {
  using std::abs;
  const double z0 = constant_term(z);
  if (!std::isfinite(z0) || abs(z0) < kWpPoleEpsilon) {
    throw PoleProximity("P(z) evaluated within " + std::to_string(kWpPoleEpsilon) +
                        " of the pole at z = 0 (z = " + std::to_string(z0) + ")");
  }
  const auto c = wp_laurent_coefficients(p);

  const T zeta = z * std::ldexp(1.0, -halvings);
  const T u = zeta * zeta;
  // S(u) = sum c_k u^{k-1}, S'(u) = sum (k-1) c_k u^{k-2}.
  T s = u * 0.0 + c[kWpSeriesTerms];
  T ds = u * 0.0 + (kWpSeriesTerms - 1) * c[kWpSeriesTerms];
  for (int k = kWpSeriesTerms - 1; k >= 2; --k) {
    s = s * u + c[static_cast<std::size_t>(k)];
    ds = ds * u + (k - 1) * c[static_cast<std::size_t>(k)];
  }
  s = s * u;  // lowest term is c_2 u
  // ds now holds sum_{k>=2} (k-1) c_k u^{k-2}
  const T inv_u = 1.0 / u;
  WpPair<T> r{inv_u + s, (ds - inv_u * inv_u) * zeta * 2.0};

  for (int step = 0; step < halvings; ++step) {
    const double q0 = constant_term(r.dwp);
    if (abs(q0) < kWpHalfPeriodGuard) {
      throw HalfPeriodSingularity("P' vanishes during doubling (|P'| = " + std::to_string(abs(q0)) +
                                  ", z = " + std::to_string(z0) + ")");
    }
    const T m = (r.wp * r.wp * 6.0 - 0.5 * p.g2) / r.dwp;
    const T m2 = m * m;
    WpPair<T> next{m2 * 0.25 - r.wp * 2.0, m * (r.wp * 12.0 - m2) * 0.25 - r.dwp};
    r = next;
    if (!std::isfinite(constant_term(r.wp)) || abs(constant_term(r.wp)) > kWpMaxMagnitude) {
      throw PoleProximity("|P| exceeds " + std::to_string(kWpMaxMagnitude) +
                          " while doubling (z = " + std::to_string(z0) + ")");
    }
  }
  if (abs(constant_term(r.wp)) > kWpMaxMagnitude) {
    throw PoleProximity("|P| exceeds pole threshold (z = " + std::to_string(z0) + ")");
  }
  return r;
}

/// (P(z), P'(z)). For a Jet1 argument both components are jets in the
/// argument's variable. Throws PoleProximity / HalfPeriodSingularity.
template <typename T>
WpPair<T> wp_pair(const T& z, WpParams p) {
  using std::abs;
  return wp_pair_with_halvings(z, p, wp_halving_count(abs(constant_term(z)), p));
}

/// Weierstrass zeta (zeta' = -P) at a real z, by the same halving scheme:
/// Laurent series 1/z - sum c_k z^{2k-1} / (2k-1), then
/// zeta(2z) = 2 zeta(z) + P''/(2 P'). Same errors as wp_pair.
double wp_zeta(double z, WpParams p);

/// P'^2 - (4P^3 - g2 P - g3), divided by max(1, |P|^3).
double wp_ode_residual(double z, WpParams p);

}  // namespace geoweb
