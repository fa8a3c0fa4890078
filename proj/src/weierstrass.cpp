#include "geoweb/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geoweb {

std::array<double, kWpSeriesTerms + 1> wp_laurent_coefficients(WpParams p) {
  std::array<double, kWpSeriesTerms + 1> c{};
  c[2] = p.g2 / 20.0;
  c[3] = p.g3 / 28.0;
  for (int k = 4; k <= kWpSeriesTerms; ++k) {
    double acc = 0.0;
    for (int m = 2; m <= k - 2; ++m) acc += c[m] * c[k - m];
    c[k] = 3.0 * acc / ((2.0 * k + 1.0) * (k - 3.0));
  }
  return c;
}

double wp_reduction_radius(WpParams p) {
  double r = 1.0;
  if (p.g2 != 0.0) r = std::min(r, std::pow(std::abs(p.g2), -0.25));
  if (p.g3 != 0.0) r = std::min(r, std::pow(std::abs(p.g3), -1.0 / 6.0));
  return 0.5 * r;
}

int wp_halving_count(double z_abs, WpParams p) {
  const double r0 = wp_reduction_radius(p);
  int n = 0;
  while (z_abs > r0 && n < 1100) {
    z_abs *= 0.5;
    ++n;
  }
  return n;
}

double wp_zeta(double z, WpParams p) {
  if (!std::isfinite(z) || std::abs(z) < kWpPoleEpsilon) {
    throw PoleProximity("zeta(z) evaluated within " + std::to_string(kWpPoleEpsilon) + " of the pole at z = 0");
  }
  const int halvings = wp_halving_count(std::abs(z), p);
  const auto c = wp_laurent_coefficients(p);
  const double zeta0 = std::ldexp(z, -halvings);
  const double u = zeta0 * zeta0;
  double tail = 0.0;
  for (int k = kWpSeriesTerms; k >= 2; --k) tail = tail * u + c[static_cast<std::size_t>(k)] / (2.0 * k - 1.0);
  // tail = sum c_k u^{k-2} / (2k-1); the series term is c_k zeta0^{2k-1}
  double zt = 1.0 / zeta0 - tail * u * zeta0;
  WpPair<double> r = wp_pair_with_halvings(zeta0, p, 0);
  for (int step = 0; step < halvings; ++step) {
    if (std::abs(r.dwp) < kWpHalfPeriodGuard) {
      throw HalfPeriodSingularity("P' vanishes during doubling (z = " + std::to_string(z) + ")");
    }
    const double m = (6.0 * r.wp * r.wp - 0.5 * p.g2) / r.dwp;
    zt = 2.0 * zt + 0.5 * m;
    r = {0.25 * m * m - 2.0 * r.wp, 0.25 * m * (12.0 * r.wp - m * m) - r.dwp};
    if (!std::isfinite(r.wp) || std::abs(r.wp) > kWpMaxMagnitude) {
      throw PoleProximity("|P| exceeds " + std::to_string(kWpMaxMagnitude) + " while doubling (z = " +
                          std::to_string(z) + ")");
    }
  }
  return zt;
}

double wp_ode_residual(double z, WpParams p) {
  const auto [wp, dwp] = wp_pair(z, p);
  const double cubic = 4.0 * wp * wp * wp - p.g2 * wp - p.g3;
  return (dwp * dwp - cubic) / std::max(1.0, std::abs(wp * wp * wp));
}

}  // namespace geoweb
