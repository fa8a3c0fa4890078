#include "geoweb/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoweb/errors.hpp"
#include "geoweb/quadrature.hpp"

namespace geoweb {
namespace {

double slope(const WebSpec& spec, double x, double y) {
  const Jet2 f = spec.f.eval_jet({x, y}, 1);
  const double fx = f.partial(1, 0), fy = f.partial(0, 1);
  if (!(std::abs(fx) > kDenominatorGuard) || !(std::abs(fy) > kDenominatorGuard)) {
    std::ostringstream os;
    os << "f_x or f_y vanishes at (" << x << ", " << y << ")";
    throw DegenerateWeb(os.str());
  }
  return fy / fx;
}

std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return t;
}

std::vector<double> cell_centres(double lo, double hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 0.5) / n;
  return t;
}

// Cumulative integral of g from `origin` (value origin) to every node.
template <typename G>
std::vector<double> cumulative(const std::vector<double>& nodes, double origin, const G& g, double tol) {
  std::vector<double> out(nodes.size());
  const auto first_right = static_cast<std::size_t>(
      std::lower_bound(nodes.begin(), nodes.end(), origin) - nodes.begin());
  double acc = origin, at = origin;
  for (std::size_t i = first_right; i < nodes.size(); ++i) {
    acc += adaptive_simpson(g, at, nodes[i], tol);
    at = nodes[i];
    out[i] = acc;
  }
  acc = origin;
  at = origin;
  for (std::size_t i = first_right; i-- > 0;) {
    acc += adaptive_simpson(g, at, nodes[i], tol);
    at = nodes[i];
    out[i] = acc;
  }
  return out;
}

double lookup(const std::vector<double>& nodes, const std::vector<double>& values, double t,
              const auto& integrand, double tol) {
  const double h = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
  long i = std::lround((t - nodes.front()) / h);
  i = std::clamp(i, 0L, static_cast<long>(nodes.size()) - 1);
  const auto k = static_cast<std::size_t>(i);
  return values[k] + adaptive_simpson(integrand, nodes[k], t, tol);
}

// The degree-`degree` expansion of the inverse of t -> T(t), given T' as a Jet1
// of degree `degree - 1` at t. Returns the coefficients of delta_t(delta_T).
Series revert(const Jet1& dT, int degree) {
  std::array<double, kMaxJetDegree + 2> b{};
  for (int k = 1; k <= degree; ++k) b[k] = dT[k - 1] / k;
  const Jet1 step = Jet1::variable(0.0, degree);
  Jet1 d = step / b[1];
  for (int it = 1; it < degree; ++it) {
    Jet1 rest = step * 0.0;
    Jet1 pw = d;
    for (int k = 2; k <= degree; ++k) {
      pw *= d;
      rest += pw * b[k];
    }
    d = (step - rest) / b[1];
  }
  Series a{};
  for (int k = 0; k <= degree; ++k) a[k] = d[k];
  return a;
}

}  // namespace

GaugeTable separate(const WebSpec& spec, Point base, const GaugeOptions& opts) {
  const Rect& r = spec.rect;
  if (opts.n < 3 || opts.check_grid < 2) throw InputError("gauge grids too small");
  if (base.x < r.x_min || base.x > r.x_max || base.y < r.y_min || base.y > r.y_max) {
    throw InputError("gauge base point outside the rectangle");
  }

  GaugeTable t;
  t.base = base;
  t.rect = r;
  t.quad_tol = opts.quad_tol;

  const auto cx = cell_centres(r.x_min, r.x_max, opts.check_grid);
  const auto cy = cell_centres(r.y_min, r.y_max, opts.check_grid);
  bool any_pos = false, any_neg = false;
  std::size_t regular = 0;
  for (double x : cx) {
    for (double y : cy) {
      try {
        t.max_abs_K = std::max(t.max_abs_K, std::abs(curvature(spec, {x, y})));
        (slope(spec, x, y) > 0.0 ? any_pos : any_neg) = true;
        ++regular;
      } catch (const DegenerateWeb&) {
        // excluded from the maximum; a flat web with such points fails below
      }
    }
  }
  if (regular == 0) throw DegenerateWeb("no regular point on the gauge check grid");
  if (!(t.max_abs_K < opts.tol_K)) {
    std::ostringstream os;
    os << "max |K| = " << t.max_abs_K << " on the rectangle exceeds " << opts.tol_K;
    throw NotCurvatureFlat(os.str());
  }
  if (any_pos && any_neg) throw SignChange("w changes sign on the rectangle");
  t.sign = any_neg ? -1.0 : 1.0;

  const double x0 = base.x, y0 = base.y;
  t.log_w_base = std::log(std::abs(slope(spec, x0, y0)));
  auto u = [&](double x) { return std::log(std::abs(slope(spec, x, y0))); };
  auto v = [&](double y) { return std::log(std::abs(slope(spec, x0, y))) - t.log_w_base; };

  for (double x : cx) {
    for (double y : cy) {
      const double defect = std::abs(std::log(std::abs(slope(spec, x, y))) - u(x) - v(y));
      t.separation_defect = std::max(t.separation_defect, defect);
    }
  }
  if (!(t.separation_defect < opts.separation_tol)) {
    std::ostringstream os;
    os << "log|w| does not separate (defect " << t.separation_defect << ")";
    throw NotCurvatureFlat(os.str());
  }

  t.xs = uniform(r.x_min, r.x_max, opts.n);
  t.ys = uniform(r.y_min, r.y_max, opts.n);
  for (double x : t.xs) t.u.push_back(u(x));
  for (double y : t.ys) t.v.push_back(v(y));

  const double sign = t.sign;
  t.X = cumulative(t.xs, x0, [&](double x) { return std::exp(-u(x)); }, opts.quad_tol);
  t.Y = cumulative(t.ys, y0, [&](double y) { return sign * std::exp(v(y)); }, opts.quad_tol);
  return t;
}

GaugedWeb::GaugedWeb(GaugeTable table, WebSpec spec) : table_(std::move(table)), spec_(std::move(spec)) {}

double GaugedWeb::X(double x) const {
  const double y0 = table_.base.y;
  auto g = [&](double s) { return 1.0 / std::abs(slope(spec_, s, y0)); };
  return lookup(table_.xs, table_.X, x, g, table_.quad_tol);
}

double GaugedWeb::Y(double y) const {
  const double x0 = table_.base.x, lw0 = table_.log_w_base, sign = table_.sign;
  auto g = [&](double s) { return sign * std::exp(std::log(std::abs(slope(spec_, x0, s))) - lw0); };
  return lookup(table_.ys, table_.Y, y, g, table_.quad_tol);
}

Jet2 GaugedWeb::to_new_coordinates(const Jet2& g, Point p, int degree) const {
  const Point P = transform(p);
  if (degree == 0) return Jet2::constant(g.value(), P, 0);

  // X'(x + d) = 1 / |w(x + d, y0)|, Y'(y + d) = sign |w(x0, y + d)| / |w(x0, y0)|
  const Jet2 fx_line = spec_.f.eval_jet({p.x, table_.base.y}, degree);
  const Jet2 fy_line = spec_.f.eval_jet({table_.base.x, p.y}, degree);
  const Jet2 wx = fx_line.d_dy() / fx_line.d_dx();
  const Jet2 wy = fy_line.d_dy() / fy_line.d_dx();
  Jet1 wx_slice(p.x, degree - 1), wy_slice(p.y, degree - 1);
  for (int k = 0; k < degree; ++k) {
    wx_slice[k] = wx.coeff(k, 0);
    wy_slice[k] = wy.coeff(0, k);
  }
  if (wx_slice.value() < 0.0) wx_slice = -wx_slice;
  if (wy_slice.value() < 0.0) wy_slice = -wy_slice;
  const Jet1 dX = 1.0 / wx_slice;
  const Jet1 dY = wy_slice * (table_.sign * std::exp(-table_.log_w_base));

  const auto [Xv, Yv] = variable_jets(P, degree);
  const Jet2 hx = compose_series(revert(dX, degree), Xv);
  const Jet2 hy = compose_series(revert(dY, degree), Yv);
  return compose_bivariate(g.truncated(degree), hx, hy);
}

Jet2 GaugedWeb::f_jet(Point p, int degree) const {
  return to_new_coordinates(spec_.f.eval_jet(p, degree), p, degree);
}

Jet2 GaugedWeb::a_jet(Point p, int degree) const {
  return to_new_coordinates(spec_.a.eval_jet(p, degree), p, degree);
}

BaseJets GaugedWeb::base_jets(Point p) const { return base_jets_from(f_jet(p, 4), a_jet(p, 3)); }

double GaugedWeb::w_tilde(Point p) const {
  const Jet2 f = f_jet(p, 1);
  const double fX = f.partial(1, 0), fY = f.partial(0, 1);
  if (!(std::abs(fX) > kDenominatorGuard)) throw DegenerateWeb("transformed f_X vanishes");
  return fY / fX;
}

void GaugedWeb::verify(int m) {
  const Rect& r = table_.rect;
  const auto cx = cell_centres(r.x_min, r.x_max, m);
  const auto cy = cell_centres(r.y_min, r.y_max, m);
  std::vector<double> Xs, Ys;
  for (double x : cx) Xs.push_back(X(x));
  for (double y : cy) Ys.push_back(Y(y));
  const auto idx = [m](int i, int j) { return static_cast<std::size_t>(i * m + j); };
  std::vector<double> logw(static_cast<std::size_t>(m * m));
  max_w_dev_ = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double wt = w_tilde({cx[static_cast<std::size_t>(i)], cy[static_cast<std::size_t>(j)]});
      max_w_dev_ = std::max(max_w_dev_, std::abs(wt - 1.0));
      logw[idx(i, j)] = std::log(std::abs(wt));
    }
  }
  max_k_fd_ = 0.0;
  for (int i = 1; i + 1 < m; ++i) {
    for (int j = 1; j + 1 < m; ++j) {
      const double dX = Xs[static_cast<std::size_t>(i + 1)] - Xs[static_cast<std::size_t>(i - 1)];
      const double dY = Ys[static_cast<std::size_t>(j + 1)] - Ys[static_cast<std::size_t>(j - 1)];
      const double mixed = (logw[idx(i + 1, j + 1)] - logw[idx(i + 1, j - 1)] -
                            logw[idx(i - 1, j + 1)] + logw[idx(i - 1, j - 1)]) /
                           (dX * dY);
      max_k_fd_ = std::max(max_k_fd_, std::abs(mixed));
    }
  }
}

GaugedWeb normalize(const GaugeTable& table, const WebSpec& spec, int verify_grid) {
  GaugedWeb g(table, spec);
  g.verify(verify_grid);
  return g;
}

std::string gauge_csv(const GaugeTable& table, char axis) {
  const bool x = axis == 'x';
  const auto& t = x ? table.xs : table.ys;
  const auto& s = x ? table.u : table.v;
  const auto& m = x ? table.X : table.Y;
  std::ostringstream os;
  os.precision(17);
  os << "t,u_or_v,X_or_Y\n";
  for (std::size_t i = 0; i < t.size(); ++i) os << t[i] << ',' << s[i] << ',' << m[i] << '\n';
  return os.str();
}

}  // namespace geoweb
