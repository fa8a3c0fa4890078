#include "geoweb/invariants.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "geoweb/errors.hpp"

namespace geoweb {
namespace {

void guard(double value, const char* name, Point p) {
  if (!(std::abs(value) > kDenominatorGuard)) {
    std::ostringstream os;
    os.precision(17);
    os << name << " vanishes (" << value << ") at (" << p.x << ", " << p.y << ")";
    throw DegenerateWeb(os.str());
  }
}

// log|g| as a jet; the sign of g does not affect any derivative.
Jet2 log_abs(const Jet2& g) { return log(g.value() < 0.0 ? -g : g); }

void require_same_point(const Jet2& a, const Jet2& b) {
  if (a.base().x != b.base().x || a.base().y != b.base().y) {
    throw JetMismatch("invariant jets taken at different points");
  }
}

}  // namespace

BaseJets base_jets_from(const Jet2& f, const Jet2& a) {
  if (f.degree() < 4) throw OrderExceeded("base_jets needs f to degree 4");
  if (a.degree() < 3) throw OrderExceeded("base_jets needs a to degree 3");
  require_same_point(f, a);
  const Point p = f.base();

  const Jet2 fx = f.d_dx();
  const Jet2 fy = f.d_dy();
  guard(fx.value(), "f_x", p);
  guard(fy.value(), "f_y", p);
  const Jet2 w = fy / fx;  // degree 3

  const Jet2 k = log_abs(w).d_dx().d_dy();  // degree 1

  const int ad = a.degree() - 1;  // alpha degree
  guard(a.value(), "a", p);
  guard(1.0 - a.value(), "1 - a", p);
  const Jet2 at = a.truncated(ad);
  const Jet2 wt = w.truncated(ad);
  const Jet2 alpha = (at * a.d_dy() - wt * a.d_dx()) / (wt * at * (1.0 - at));
  return BaseJets{w, alpha, k};
}

BaseJets base_jets(const WebSpec& spec, Point p, bool alpha_degree3) {
  return base_jets_from(spec.f.eval_jet(p, 4), spec.a.eval_jet(p, alpha_degree3 ? 4 : 3));
}

double curvature_from(const Jet2& f) {
  if (f.degree() < 3) throw OrderExceeded("curvature needs f to degree 3");
  const Point p = f.base();
  const Jet2 f3 = f.truncated(3);
  const Jet2 fx = f3.d_dx();
  const Jet2 fy = f3.d_dy();
  guard(fx.value(), "f_x", p);
  guard(fy.value(), "f_y", p);
  const double mixed = log_abs(fx / fy).partial(1, 1);
  return -mixed / (fx.value() * fy.value());
}

double curvature(const WebSpec& spec, Point p) { return curvature_from(spec.f.eval_jet(p, 3)); }

LiouvilleTerms liouville_terms(const Jet2& alpha, const Jet2& w, const Jet2& k) {
  require_same_point(alpha, w);
  require_same_point(alpha, k);
  guard(w.value(), "w", alpha.base());

  const double W = w.value();
  const double wx = w.partial(1, 0), wy = w.partial(0, 1);
  const double wxx = w.partial(2, 0), wxy = w.partial(1, 1);
  const double kv = k.value(), kx = k.partial(1, 0), ky = k.partial(0, 1);
  const double a = alpha.value();
  const double ax = alpha.partial(1, 0), ay = alpha.partial(0, 1);
  const double axx = alpha.partial(2, 0), axy = alpha.partial(1, 1), ayy = alpha.partial(0, 2);

  const double kw_x = kx * W + kv * wx;                // (k w)_x
  const double k_over_w_y = ky / W - kv * wy / (W * W);  // (k / w)_y

  LiouvilleTerms t;
  t.l1[0] = W * (-kw_x + axx + a * ax);
  t.l1[1] = a * wxx + (a * a + 3.0 * ax) * wx - 2.0 * axy - 2.0 * a * ay;
  t.l1[2] = (-a * wxy - 2.0 * ay * wx + a * wx * wx) / W;
  t.l1[3] = a * wx * wy / (W * W);

  t.l2[0] = W * W * (-k_over_w_y + 2.0 * a * ax);
  t.l2[1] = W * (2.0 * a * a * wx - 2.0 * axy - a * ay);
  t.l2[2] = -a * wxy - 2.0 * ay * wx + ayy;
  t.l2[3] = (a * wx * wy - ay * wy) / W;
  return t;
}

LiouvillePair liouville_from_alpha(const Jet2& alpha, const Jet2& w, const Jet2& k) {
  const LiouvilleTerms t = liouville_terms(alpha, w, k);
  return {(t.l1[0] + t.l1[1] + t.l1[2] + t.l1[3]) / 3.0,
          (t.l2[0] + t.l2[1] + t.l2[2] + t.l2[3]) / 3.0};
}

LiouvillePair liouville(const WebSpec& spec, Point p) {
  const BaseJets b = base_jets(spec, p);
  return liouville_from_alpha(b.alpha, b.w, b.k);
}

ResidualPair reduced_residuals(const Jet2& alpha) {
  const double a = alpha.value();
  const double ax = alpha.partial(1, 0), ay = alpha.partial(0, 1);
  const double axx = alpha.partial(2, 0), axy = alpha.partial(1, 1), ayy = alpha.partial(0, 2);
  return {axx - 2.0 * axy + a * ax - 2.0 * a * ay, ayy - 2.0 * axy + 2.0 * a * ax - a * ay};
}

ResidualPair factored_residuals(const Jet2& alpha) {
  if (alpha.degree() < 3) throw OrderExceeded("factored residuals need a degree-3 alpha jet");
  const Jet2 a2 = alpha.truncated(2);
  const Jet2 half_sq = a2 * a2 * 0.5;
  const Jet2 g = alpha.d_dx() + half_sq;  // a_x + a^2/2
  const Jet2 h = alpha.d_dy() - half_sq;  // a_y - a^2/2
  return {g.partial(1, 0) - 2.0 * g.partial(0, 1), h.partial(0, 1) - 2.0 * h.partial(1, 0)};
}

InvariantSample sample_invariants(const WebSpec& spec, Point p) {
  const Jet2 f = spec.f.eval_jet(p, 4);
  const BaseJets b = base_jets_from(f, spec.a.eval_jet(p, 3));
  const LiouvillePair l = liouville_from_alpha(b.alpha, b.w, b.k);
  return InvariantSample{p, b.w.value(), b.alpha.value(), b.k.value(), curvature_from(f), l.L1, l.L2};
}

}  // namespace geoweb
