#pragma once

// Truncated Taylor arithmetic (forward-mode AD) in one and two variables.
//
// Coefficients are stored in Taylor form, c[i][j] = d^{i+j}g / dx^i dy^j / (i! j!),
// so products are plain truncated convolutions. Raw derivatives come back
// through partial().

#include <array>
#include <cstddef>
#include <utility>

namespace geoweb {

inline constexpr int kMaxJetDegree = 4;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Univariate Taylor coefficients t[k] = g^{(k)}(c) / k!.
using Series = std::array<double, kMaxJetDegree + 1>;

enum class Analytic { exp, log, sqrt, sin, cos, tan, sinh, cosh, tanh, recip, pow };

struct AnalyticFn {
  Analytic kind;
  double exponent = 0.0;  // only read for Analytic::pow
};

const char* to_string(Analytic kind);

/// Taylor coefficients of fn around c, up to `degree`. Throws EvalDomainError
/// when fn is not defined and smooth at c.
Series taylor_series(AnalyticFn fn, double c, int degree);

class Jet1 {
 public:
  Jet1() = default;
  Jet1(double t0, int degree);

  static Jet1 constant(double value, double t0, int degree);
  static Jet1 variable(double t0, int degree);

  double base() const noexcept { return t0_; }
  int degree() const noexcept { return degree_; }
  double value() const noexcept { return c_[0]; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  /// k-th raw derivative k!·c[k].
  double derivative(int k) const;
  /// Jet of g' (degree drops by one).
  Jet1 differentiated() const;
  Jet1 truncated(int degree) const;

  Jet1 operator-() const;
  Jet1& operator+=(const Jet1& o);
  Jet1& operator-=(const Jet1& o);
  Jet1& operator*=(const Jet1& o);
  Jet1& operator/=(const Jet1& o);
  Jet1& operator+=(double s);
  Jet1& operator-=(double s);
  Jet1& operator*=(double s);
  Jet1& operator/=(double s);

 private:
  void require_compatible(const Jet1& o) const;

  double t0_ = 0.0;
  int degree_ = 0;
  Series c_{};
};

class Jet2 {
 public:
  static constexpr std::size_t kStorage = (kMaxJetDegree + 1) * (kMaxJetDegree + 2) / 2;

  Jet2() = default;
  Jet2(Point base, int degree);

  static Jet2 constant(double value, Point base, int degree);

  Point base() const noexcept { return base_; }
  int degree() const noexcept { return degree_; }
  double value() const noexcept { return c_[0]; }

  /// Taylor coefficient c[i][j]; i + j must not exceed the degree.
  double coeff(int i, int j) const;
  double& coeff(int i, int j);
  /// Raw partial derivative i!·j!·c[i][j]. Throws OrderExceeded.
  double partial(int i, int j) const;

  Jet2 d_dx() const;
  Jet2 d_dy() const;
  Jet2 truncated(int degree) const;
  /// Same coefficients with the constant term dropped.
  Jet2 increment() const;

  Jet2 operator-() const;
  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator+=(double s);
  Jet2& operator-=(double s);
  Jet2& operator*=(double s);
  Jet2& operator/=(double s);

  static constexpr std::size_t index(int i, int j) {
    const int n = i + j;
    return static_cast<std::size_t>(n * (n + 1) / 2 + j);
  }

 private:
  void require_compatible(const Jet2& o) const;

  Point base_{};
  int degree_ = 0;
  std::array<double, kStorage> c_{};
};

#define GEOWEB_JET_BINOPS(J)                                                    \
  inline J operator+(J a, const J& b) { return a += b; }                        \
  inline J operator-(J a, const J& b) { return a -= b; }                        \
  inline J operator*(J a, const J& b) { return a *= b; }                        \
  inline J operator/(J a, const J& b) { return a /= b; }                        \
  inline J operator+(J a, double s) { return a += s; }                          \
  inline J operator-(J a, double s) { return a -= s; }                          \
  inline J operator*(J a, double s) { return a *= s; }                          \
  inline J operator/(J a, double s) { return a /= s; }                          \
  inline J operator+(double s, J a) { return a += s; }                          \
  inline J operator-(double s, const J& a) { return (-a) += s; }                \
  inline J operator*(double s, J a) { return a *= s; }                          \
  J operator/(double s, const J& a);

GEOWEB_JET_BINOPS(Jet1)
GEOWEB_JET_BINOPS(Jet2)
#undef GEOWEB_JET_BINOPS

/// Jets of the coordinate functions x and y at `p`.
std::pair<Jet2, Jet2> variable_jets(Point p, int degree);

Jet1 compose_analytic(AnalyticFn fn, const Jet1& a);
Jet2 compose_analytic(AnalyticFn fn, const Jet2& a);

/// Substitutes the increment h (zero constant term) into the series
/// sum_k t[k] h^k. Used to push a univariate expansion through a line.
Jet2 compose_series(const Series& t, const Jet2& h);
Jet1 compose_series(const Series& t, const Jet1& h);

/// g(x0 + hx, y0 + hy) as a jet at the base point of hx/hy, where hx and hy
/// are increments (their constant terms are ignored) and g is a jet at (x0, y0).
/// Used for changes of coordinates.
Jet2 compose_bivariate(const Jet2& g, const Jet2& hx, const Jet2& hy);

/// Raw partial derivative, free-function spelling.
inline double partial(const Jet2& a, int i, int j) { return a.partial(i, j); }

// Overloads so generic code can call exp(x) etc. on doubles and jets alike.
#define GEOWEB_JET_FN(name)                                                        \
  inline Jet1 name(const Jet1& a) { return compose_analytic({Analytic::name}, a); } \
  inline Jet2 name(const Jet2& a) { return compose_analytic({Analytic::name}, a); }
GEOWEB_JET_FN(exp)
GEOWEB_JET_FN(log)
GEOWEB_JET_FN(sqrt)
GEOWEB_JET_FN(sin)
GEOWEB_JET_FN(cos)
GEOWEB_JET_FN(tan)
GEOWEB_JET_FN(sinh)
GEOWEB_JET_FN(cosh)
GEOWEB_JET_FN(tanh)
#undef GEOWEB_JET_FN

inline Jet1 pow(const Jet1& a, double r) { return compose_analytic({Analytic::pow, r}, a); }
inline Jet2 pow(const Jet2& a, double r) { return compose_analytic({Analytic::pow, r}, a); }

inline double constant_term(double v) { return v; }
inline double constant_term(const Jet1& a) { return a.value(); }
inline double constant_term(const Jet2& a) { return a.value(); }

}  // namespace geoweb
