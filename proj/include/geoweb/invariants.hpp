#pragma once

// Differential invariants of a planar 4-web whose 3-subweb is given by the
// foliations x = const, y = const, f(x, y) = const and whose fourth
// foliation is described by the basic invariant a(x, y):
//
//   w = f_y / f_x,   alpha = (a a_y - w a_x) / (w a (1 - a)),   k = (log w)_xy
//
// plus the 3-web curvature K and the two components L1, L2 of the
// Liouville tensor.

#include <array>

#include "geoweb/expr.hpp"
#include "geoweb/jet.hpp"

namespace geoweb {

struct Rect {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

struct WebSpec {
  Expression f;
  Expression a;
  Rect rect;
};

/// |f_x|, |f_y|, |a|, |1 - a| must exceed this for the web to be regular at a point.
inline constexpr double kDenominatorGuard = 1e-10;

struct BaseJets {
  Jet2 w;      // degree 3
  Jet2 alpha;  // degree 2 (3 when requested)
  Jet2 k;      // degree 1
};

/// Jets of w, alpha and k at p. f is expanded to degree 4 and a to degree 3,
/// or 4 when `alpha_degree3` is set. Throws DegenerateWeb.
BaseJets base_jets(const WebSpec& spec, Point p, bool alpha_degree3 = false);

/// Same from precomputed jets of f (degree 4) and a (degree 3 or 4).
BaseJets base_jets_from(const Jet2& f, const Jet2& a);

/// K = -(1 / (f_x f_y)) (log(f_x / f_y))_xy.
double curvature(const WebSpec& spec, Point p);
double curvature_from(const Jet2& f);

/// The four bracketed groups of each line of 3 L1 and 3 L2, in printed order.
struct LiouvilleTerms {
  std::array<double, 4> l1{};
  std::array<double, 4> l2{};
};

struct LiouvillePair {
  double L1 = 0.0;
  double L2 = 0.0;
};

LiouvilleTerms liouville_terms(const Jet2& alpha, const Jet2& w, const Jet2& k);
LiouvillePair liouville_from_alpha(const Jet2& alpha, const Jet2& w, const Jet2& k);
LiouvillePair liouville(const WebSpec& spec, Point p);

struct ResidualPair {
  double first = 0.0;
  double second = 0.0;
};

/// L1 = L2 = 0 specialized to w = 1, k = 0:
///   R1 = a_xx - 2 a_xy + a a_x - 2 a a_y,  R2 = a_yy - 2 a_xy + 2 a a_x - a a_y.
ResidualPair reduced_residuals(const Jet2& alpha);

/// (d_x - 2 d_y)(a_x + a^2/2) and (d_y - 2 d_x)(a_y - a^2/2); needs a degree-3 jet.
ResidualPair factored_residuals(const Jet2& alpha);

struct InvariantSample {
  Point p;
  double w = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  double K = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
};

InvariantSample sample_invariants(const WebSpec& spec, Point p);

}  // namespace geoweb
