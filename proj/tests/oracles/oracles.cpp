#include "oracles.hpp"

#include <cmath>
#include <vector>

namespace geoweb::oracle {
namespace {

// Stencil of the order-n central difference: offsets (n/2 - k) h, weights
// (-1)^k C(n, k).
struct Stencil {
  std::vector<long double> offset;
  std::vector<long double> weight;
};

Stencil stencil(int n) {
  Stencil s;
  long double binom = 1.0L;
  for (int k = 0; k <= n; ++k) {
    s.offset.push_back(0.5L * n - k);
    s.weight.push_back((k % 2 == 0 ? 1.0L : -1.0L) * binom);
    binom = binom * (n - k) / (k + 1);
  }
  return s;
}

long double difference(const Field& g, long double x, long double y, int i, int j, long double h) {
  const Stencil sx = stencil(i), sy = stencil(j);
  long double acc = 0.0L;
  for (std::size_t a = 0; a < sx.offset.size(); ++a) {
    for (std::size_t b = 0; b < sy.offset.size(); ++b) {
      acc += sx.weight[a] * sy.weight[b] * g(x + sx.offset[a] * h, y + sy.offset[b] * h);
    }
  }
  return acc / std::pow(h, static_cast<long double>(i + j));
}

long double factorial(int n) {
  long double r = 1.0L;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

constexpr long double kInnerStep = 1e-3L;
constexpr long double kOuterStep = 2e-2L;

}  // namespace

long double fd_partial(const Field& g, long double x, long double y, int i, int j, long double h) {
  if (i + j == 0) return g(x, y);
  const long double d1 = difference(g, x, y, i, j, h);
  const long double d2 = difference(g, x, y, i, j, h / 2);
  const long double d4 = difference(g, x, y, i, j, h / 4);
  return (64.0L * d4 - 20.0L * d2 + d1) / 45.0L;
}

long double fd_coefficient(const Field& g, long double x, long double y, int i, int j, long double h) {
  return fd_partial(g, x, y, i, j, h) / (factorial(i) * factorial(j));
}

Field field_of(const Expression& e) {
  return [e](long double x, long double y) { return e.eval(x, y); };
}

Field slope_field(const Expression& f) {
  const Field F = field_of(f);
  return [F](long double x, long double y) {
    return fd_partial(F, x, y, 0, 1, kInnerStep) / fd_partial(F, x, y, 1, 0, kInnerStep);
  };
}

Field alpha_field(const Expression& f, const Expression& a) {
  const Field w = slope_field(f);
  const Field A = field_of(a);
  return [w, A](long double x, long double y) {
    const long double av = A(x, y);
    const long double ax = fd_partial(A, x, y, 1, 0, kInnerStep);
    const long double ay = fd_partial(A, x, y, 0, 1, kInnerStep);
    const long double wv = w(x, y);
    return (av * ay - wv * ax) / (wv * av * (1.0L - av));
  };
}

long double fd_curvature(const Expression& f, long double x, long double y) {
  const Field F = field_of(f);
  const Field log_ratio = [F](long double s, long double t) {
    return std::log(std::fabs(fd_partial(F, s, t, 1, 0, kInnerStep) / fd_partial(F, s, t, 0, 1, kInnerStep)));
  };
  const long double fx = fd_partial(F, x, y, 1, 0);
  const long double fy = fd_partial(F, x, y, 0, 1);
  return -fd_partial(log_ratio, x, y, 1, 1, kOuterStep) / (fx * fy);
}

FdLiouville fd_liouville_fields(const Field& w, const Field& alpha, long double x, long double y) {
  const Field log_w = [w](long double s, long double t) { return std::log(std::fabs(w(s, t))); };
  const long double h = kOuterStep;

  const long double W = w(x, y);
  const long double Wx = fd_partial(w, x, y, 1, 0, h), Wy = fd_partial(w, x, y, 0, 1, h);
  const long double Wxx = fd_partial(w, x, y, 2, 0, h), Wxy = fd_partial(w, x, y, 1, 1, h);
  const long double K = fd_partial(log_w, x, y, 1, 1, h);
  const long double Kx = fd_partial(log_w, x, y, 2, 1, h);
  const long double Ky = fd_partial(log_w, x, y, 1, 2, h);
  const long double A = alpha(x, y);
  const long double Ax = fd_partial(alpha, x, y, 1, 0, h), Ay = fd_partial(alpha, x, y, 0, 1, h);
  const long double Axx = fd_partial(alpha, x, y, 2, 0, h);
  const long double Axy = fd_partial(alpha, x, y, 1, 1, h);
  const long double Ayy = fd_partial(alpha, x, y, 0, 2, h);

  const long double kw_x = Kx * W + K * Wx;
  const long double k_by_w_y = (Ky * W - K * Wy) / (W * W);

  FdLiouville r;
  r.l1 = {W * (Axx + A * Ax - kw_x),
          A * Wxx + (A * A + 3.0L * Ax) * Wx - 2.0L * (Axy + A * Ay),
          (A * Wx * Wx - A * Wxy - 2.0L * Ay * Wx) / W,
          A * Wx * Wy / (W * W)};
  r.l2 = {W * W * (2.0L * A * Ax - k_by_w_y),
          W * (2.0L * A * A * Wx - 2.0L * Axy - A * Ay),
          Ayy - A * Wxy - 2.0L * Ay * Wx,
          Wy * (A * Wx - Ay) / W};
  for (int i = 0; i < 4; ++i) {
    r.L1 += r.l1[static_cast<std::size_t>(i)] / 3.0L;
    r.L2 += r.l2[static_cast<std::size_t>(i)] / 3.0L;
    r.scale1 += std::fabs(r.l1[static_cast<std::size_t>(i)]) / 3.0L;
    r.scale2 += std::fabs(r.l2[static_cast<std::size_t>(i)]) / 3.0L;
  }
  return r;
}

FdLiouville fd_liouville(const Expression& f, const Expression& a, long double x, long double y) {
  return fd_liouville_fields(slope_field(f), alpha_field(f, a), x, y);
}

LaurentValue laurent20(long double z, long double g2, long double g3) {
  constexpr int kTerms = 20;
  std::array<long double, kTerms + 1> c{};
  c[2] = g2 / 20.0L;
  c[3] = g3 / 28.0L;
  for (int k = 4; k <= kTerms; ++k) {
    long double s = 0.0L;
    for (int m = 2; m <= k - 2; ++m) s += c[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(k - m)];
    c[static_cast<std::size_t>(k)] = 3.0L * s / ((2.0L * k + 1.0L) * (k - 3.0L));
  }
  LaurentValue v{1.0L / (z * z), -2.0L / (z * z * z)};
  for (int k = 2; k <= kTerms; ++k) {
    const auto ck = c[static_cast<std::size_t>(k)];
    v.wp += ck * std::pow(z, static_cast<long double>(2 * k - 2));
    v.dwp += (2.0L * k - 2.0L) * ck * std::pow(z, static_cast<long double>(2 * k - 3));
  }
  return v;
}

}  // namespace geoweb::oracle
