#pragma once

// Normalization of a curvature-flat web to w = 1 by a change of coordinates
// X = X(x), Y = Y(y) that keeps the foliations x = const and y = const.
//
// With log|w| = u(x) + v(y) and f~(X, Y) = f(x, y) the slope transforms as
// w~ = w X'(x) / Y'(y), so the normalizing choice is
//   X'(x) = exp(-u(x)),   Y'(y) = sign(w) exp(v(y)).
// u(x) = log|w(x, y0)| and v(y) = log|w(x0, y)| - log|w(x0, y0)|, v(y0) = 0.

#include <string>
#include <vector>

#include "geoweb/invariants.hpp"

namespace geoweb {

struct GaugeOptions {
  int n = 513;               // table points per axis
  int check_grid = 64;       // cell-centred grid for the K and separation tests
  double tol_K = 1e-8;
  double separation_tol = 1e-6;
  double quad_tol = 1e-10;   // absolute, per table panel
};

struct GaugeTable {
  Point base;
  Rect rect;
  double sign = 1.0;         // sign of w on the rectangle
  double log_w_base = 0.0;   // log|w(x0, y0)|
  double max_abs_K = 0.0;
  double separation_defect = 0.0;
  double quad_tol = 1e-10;
  std::vector<double> xs, u, X;
  std::vector<double> ys, v, Y;
};

/// Checks K = 0, splits log|w| and integrates the coordinate maps.
/// Throws NotCurvatureFlat, SignChange, DegenerateWeb, QuadratureFailure.
GaugeTable separate(const WebSpec& spec, Point base, const GaugeOptions& opts = {});

/// The web expressed in the normalized coordinates (X, Y).
class GaugedWeb {
 public:
  GaugedWeb(GaugeTable table, WebSpec spec);

  const GaugeTable& table() const { return table_; }

  double X(double x) const;
  double Y(double y) const;
  Point transform(Point p) const { return {X(p.x), Y(p.y)}; }

  /// Jets of f and a in the new coordinates, based at transform(p).
  Jet2 f_jet(Point p, int degree) const;
  Jet2 a_jet(Point p, int degree) const;
  /// Invariants recomputed from the transformed jets.
  BaseJets base_jets(Point p) const;
  /// w~ at transform(p).
  double w_tilde(Point p) const;

  /// max |w~ - 1| over an m x m cell-centred grid of the rectangle.
  double max_abs_w_deviation() const { return max_w_dev_; }
  /// max |(log w~)_XY| by central differences on the transformed grid.
  double max_abs_k_fd() const { return max_k_fd_; }

  void verify(int m);

 private:
  Jet2 to_new_coordinates(const Jet2& g, Point p, int degree) const;

  GaugeTable table_;
  WebSpec spec_;
  double max_w_dev_ = 0.0;
  double max_k_fd_ = 0.0;
};

/// Builds the sampler and runs verify(m).
GaugedWeb normalize(const GaugeTable& table, const WebSpec& spec, int verify_grid = 65);

/// CSV with header t,u_or_v,X_or_Y for the x axis (axis = 'x') or y axis.
std::string gauge_csv(const GaugeTable& table, char axis);

}  // namespace geoweb
