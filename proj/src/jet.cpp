#include "geoweb/jet.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "geoweb/errors.hpp"

namespace geoweb {
namespace {

constexpr double kZeroDivisor = 1e-300;

void require_degree(int degree) {
  if (degree < 0 || degree > kMaxJetDegree) {
    throw OrderExceeded("jet degree " + std::to_string(degree) + " outside 0.." +
                        std::to_string(kMaxJetDegree));
  }
}

std::string describe(AnalyticFn fn, double c) {
  std::ostringstream os;
  os << to_string(fn.kind);
  if (fn.kind == Analytic::pow) os << "(" << fn.exponent << ")";
  os << " at " << c;
  return os.str();
}

constexpr double kFactorial[] = {1.0, 1.0, 2.0, 6.0, 24.0, 120.0};

Series series_divide(const Series& a, const Series& b, int degree) {
  Series q{};
  for (int k = 0; k <= degree; ++k) {
    double acc = a[k];
    for (int m = 1; m <= k; ++m) acc -= b[m] * q[k - m];
    q[k] = acc / b[0];
  }
  return q;
}

// Cyclic derivative patterns: sin -> cos -> -sin -> -cos, sinh -> cosh -> sinh.
Series trig_series(double s, double co, int degree, bool hyperbolic, bool start_with_sine) {
  Series t{};
  for (int k = 0; k <= degree; ++k) {
    double v;
    const int phase = (start_with_sine ? 0 : 1) + k;
    if (hyperbolic) {
      v = (phase % 2 == 0) ? s : co;
    } else {
      switch (phase % 4) {
        case 0: v = s; break;
        case 1: v = co; break;
        case 2: v = -s; break;
        default: v = -co; break;
      }
    }
    t[k] = v / kFactorial[k];
  }
  return t;
}

double generalized_binomial(double r, int k) {
  double b = 1.0;
  for (int m = 0; m < k; ++m) b *= (r - m) / (m + 1);
  return b;
}

bool is_integer(double r) { return std::isfinite(r) && std::nearbyint(r) == r; }

}  // namespace

const char* to_string(Analytic kind) {
  switch (kind) {
    case Analytic::exp: return "exp";
    case Analytic::log: return "log";
    case Analytic::sqrt: return "sqrt";
    case Analytic::sin: return "sin";
    case Analytic::cos: return "cos";
    case Analytic::tan: return "tan";
    case Analytic::sinh: return "sinh";
    case Analytic::cosh: return "cosh";
    case Analytic::tanh: return "tanh";
    case Analytic::recip: return "recip";
    case Analytic::pow: return "pow";
  }
  return "?";
}

Series taylor_series(AnalyticFn fn, double c, int degree) {
  require_degree(degree);
  if (!std::isfinite(c)) throw EvalDomainError("non-finite argument to " + describe(fn, c));
  Series t{};
  switch (fn.kind) {
    case Analytic::exp: {
      const double e = std::exp(c);
      for (int k = 0; k <= degree; ++k) t[k] = e / kFactorial[k];
      break;
    }
    case Analytic::log: {
      if (c <= 0.0) throw EvalDomainError("log of non-positive value: " + describe(fn, c));
      t[0] = std::log(c);
      double inv_pow = 1.0;
      for (int k = 1; k <= degree; ++k) {
        inv_pow /= c;
        t[k] = ((k % 2 == 1) ? 1.0 : -1.0) * inv_pow / k;
      }
      break;
    }
    case Analytic::sqrt:
      if (c < 0.0 || (c == 0.0 && degree > 0)) {
        throw EvalDomainError("sqrt not smooth: " + describe(fn, c));
      }
      return taylor_series({Analytic::pow, 0.5}, c, degree);
    case Analytic::pow: {
      const double r = fn.exponent;
      if (!is_integer(r) && c <= 0.0) {
        throw EvalDomainError("real power needs a positive base: " + describe(fn, c));
      }
      if (c == 0.0 && r < 0.0) throw EvalDomainError("negative power of zero: " + describe(fn, c));
      for (int k = 0; k <= degree; ++k) {
        const double b = generalized_binomial(r, k);
        t[k] = (b == 0.0) ? 0.0 : b * std::pow(c, r - k);
      }
      break;
    }
    case Analytic::recip: {
      if (std::abs(c) < kZeroDivisor) throw DivisionByZeroJet("reciprocal of zero: " + describe(fn, c));
      double inv_pow = 1.0 / c;
      for (int k = 0; k <= degree; ++k) {
        t[k] = ((k % 2 == 0) ? 1.0 : -1.0) * inv_pow;
        inv_pow /= c;
      }
      break;
    }
    case Analytic::sin: return trig_series(std::sin(c), std::cos(c), degree, false, true);
    case Analytic::cos: return trig_series(std::cos(c), -std::sin(c), degree, false, true);
    case Analytic::sinh: return trig_series(std::sinh(c), std::cosh(c), degree, true, true);
    case Analytic::cosh: return trig_series(std::cosh(c), std::sinh(c), degree, true, true);
    case Analytic::tan: {
      const double co = std::cos(c);
      if (std::abs(co) < 1e-15) throw EvalDomainError("tan at a pole: " + describe(fn, c));
      return series_divide(taylor_series({Analytic::sin}, c, degree),
                           taylor_series({Analytic::cos}, c, degree), degree);
    }
    case Analytic::tanh:
      return series_divide(taylor_series({Analytic::sinh}, c, degree),
                           taylor_series({Analytic::cosh}, c, degree), degree);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Jet1

Jet1::Jet1(double t0, int degree) : t0_(t0), degree_(degree) { require_degree(degree); }

Jet1 Jet1::constant(double value, double t0, int degree) {
  Jet1 j(t0, degree);
  j.c_[0] = value;
  return j;
}

Jet1 Jet1::variable(double t0, int degree) {
  Jet1 j = constant(t0, t0, degree);
  if (degree >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet1::derivative(int k) const {
  if (k < 0 || k > degree_) throw OrderExceeded("derivative order exceeds jet degree");
  return kFactorial[k] * c_[k];
}

Jet1 Jet1::differentiated() const {
  if (degree_ == 0) throw OrderExceeded("cannot differentiate a degree-0 jet");
  Jet1 d(t0_, degree_ - 1);
  for (int k = 0; k < degree_; ++k) d.c_[k] = (k + 1) * c_[k + 1];
  return d;
}

Jet1 Jet1::truncated(int degree) const {
  if (degree > degree_) throw OrderExceeded("cannot raise jet degree by truncation");
  Jet1 r(t0_, degree);
  for (int k = 0; k <= degree; ++k) r.c_[k] = c_[k];
  return r;
}

void Jet1::require_compatible(const Jet1& o) const {
  if (t0_ != o.t0_ || degree_ != o.degree_) throw JetMismatch("Jet1 base point or degree mismatch");
}

Jet1 Jet1::operator-() const {
  Jet1 r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet1& Jet1::operator+=(const Jet1& o) {
  require_compatible(o);
  for (int k = 0; k <= degree_; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet1& Jet1::operator-=(const Jet1& o) {
  require_compatible(o);
  for (int k = 0; k <= degree_; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet1& Jet1::operator*=(const Jet1& o) {
  require_compatible(o);
  Series r{};
  for (int k = 0; k <= degree_; ++k) {
    for (int m = 0; m <= k; ++m) r[k] += c_[m] * o.c_[k - m];
  }
  c_ = r;
  return *this;
}

Jet1& Jet1::operator/=(const Jet1& o) {
  require_compatible(o);
  if (std::abs(o.c_[0]) < kZeroDivisor) throw DivisionByZeroJet("Jet1 division by zero");
  c_ = series_divide(c_, o.c_, degree_);
  return *this;
}

Jet1& Jet1::operator+=(double s) { c_[0] += s; return *this; }
Jet1& Jet1::operator-=(double s) { c_[0] -= s; return *this; }
Jet1& Jet1::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}
Jet1& Jet1::operator/=(double s) {
  if (std::abs(s) < kZeroDivisor) throw DivisionByZeroJet("Jet1 division by zero scalar");
  for (auto& v : c_) v /= s;
  return *this;
}

Jet1 operator/(double s, const Jet1& a) { return Jet1::constant(s, a.base(), a.degree()) /= a; }

// ---------------------------------------------------------------------------
// Jet2

Jet2::Jet2(Point base, int degree) : base_(base), degree_(degree) { require_degree(degree); }

Jet2 Jet2::constant(double value, Point base, int degree) {
  Jet2 j(base, degree);
  j.c_[0] = value;
  return j;
}

double Jet2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > degree_) throw OrderExceeded("coefficient order exceeds jet degree");
  return c_[index(i, j)];
}

double& Jet2::coeff(int i, int j) {
  if (i < 0 || j < 0 || i + j > degree_) throw OrderExceeded("coefficient order exceeds jet degree");
  return c_[index(i, j)];
}

double Jet2::partial(int i, int j) const { return kFactorial[i] * kFactorial[j] * coeff(i, j); }

Jet2 Jet2::d_dx() const {
  if (degree_ == 0) throw OrderExceeded("cannot differentiate a degree-0 jet");
  Jet2 d(base_, degree_ - 1);
  for (int n = 0; n < degree_; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      d.c_[index(i, j)] = (i + 1) * c_[index(i + 1, j)];
    }
  }
  return d;
}

Jet2 Jet2::d_dy() const {
  if (degree_ == 0) throw OrderExceeded("cannot differentiate a degree-0 jet");
  Jet2 d(base_, degree_ - 1);
  for (int n = 0; n < degree_; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      d.c_[index(i, j)] = (j + 1) * c_[index(i, j + 1)];
    }
  }
  return d;
}

Jet2 Jet2::truncated(int degree) const {
  if (degree > degree_) throw OrderExceeded("cannot raise jet degree by truncation");
  Jet2 r(base_, degree);
  const std::size_t count = static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
  for (std::size_t k = 0; k < count; ++k) r.c_[k] = c_[k];
  return r;
}

Jet2 Jet2::increment() const {
  Jet2 r = *this;
  r.c_[0] = 0.0;
  return r;
}

void Jet2::require_compatible(const Jet2& o) const {
  if (base_.x != o.base_.x || base_.y != o.base_.y || degree_ != o.degree_) {
    throw JetMismatch("Jet2 base point or degree mismatch");
  }
}

Jet2 Jet2::operator-() const {
  Jet2 r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  require_compatible(o);
  for (std::size_t k = 0; k < kStorage; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  require_compatible(o);
  for (std::size_t k = 0; k < kStorage; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  require_compatible(o);
  std::array<double, kStorage> r{};
  for (int n = 0; n <= degree_; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      double acc = 0.0;
      for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) acc += c_[index(p, q)] * o.c_[index(i - p, j - q)];
      }
      r[index(i, j)] = acc;
    }
  }
  c_ = r;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
  require_compatible(o);
  const double b0 = o.c_[0];
  if (std::abs(b0) < kZeroDivisor) throw DivisionByZeroJet("Jet2 division by a jet with zero value");
  std::array<double, kStorage> q{};
  for (int n = 0; n <= degree_; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      double acc = c_[index(i, j)];
      for (int p = 0; p <= i; ++p) {
        for (int s = 0; s <= j; ++s) {
          if (p == 0 && s == 0) continue;
          acc -= o.c_[index(p, s)] * q[index(i - p, j - s)];
        }
      }
      q[index(i, j)] = acc / b0;
    }
  }
  c_ = q;
  return *this;
}

Jet2& Jet2::operator+=(double s) { c_[0] += s; return *this; }
Jet2& Jet2::operator-=(double s) { c_[0] -= s; return *this; }
Jet2& Jet2::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}
Jet2& Jet2::operator/=(double s) {
  if (std::abs(s) < kZeroDivisor) throw DivisionByZeroJet("Jet2 division by zero scalar");
  for (auto& v : c_) v /= s;
  return *this;
}

Jet2 operator/(double s, const Jet2& a) { return Jet2::constant(s, a.base(), a.degree()) /= a; }

std::pair<Jet2, Jet2> variable_jets(Point p, int degree) {
  Jet2 x = Jet2::constant(p.x, p, degree);
  Jet2 y = Jet2::constant(p.y, p, degree);
  if (degree >= 1) {
    x.coeff(1, 0) = 1.0;
    y.coeff(0, 1) = 1.0;
  }
  return {x, y};
}

template <typename J>
static J horner(const Series& t, const J& h) {
  J r = h * 0.0 + t[static_cast<std::size_t>(h.degree())];
  for (int k = h.degree() - 1; k >= 0; --k) {
    r *= h;
    r += t[static_cast<std::size_t>(k)];
  }
  return r;
}

Jet2 compose_series(const Series& t, const Jet2& h) { return horner(t, h.increment()); }

Jet1 compose_series(const Series& t, const Jet1& h) {
  Jet1 inc = h;
  inc[0] = 0.0;
  return horner(t, inc);
}

Jet2 compose_bivariate(const Jet2& g, const Jet2& hx, const Jet2& hy) {
  const Jet2 dx = hx.increment();
  const Jet2 dy = hy.increment();
  const int degree = dx.degree();
  if (g.degree() < degree) throw OrderExceeded("outer jet degree below the substitution degree");
  // powers of the increments
  std::array<Jet2, kMaxJetDegree + 1> px, py;
  px[0] = Jet2::constant(1.0, dx.base(), degree);
  py[0] = px[0];
  for (int k = 1; k <= degree; ++k) {
    px[k] = px[k - 1] * dx;
    py[k] = py[k - 1] * dy;
  }
  Jet2 r(dx.base(), degree);
  for (int n = 0; n <= degree; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      r += px[i] * py[j] * g.coeff(i, j);
    }
  }
  return r;
}

Jet1 compose_analytic(AnalyticFn fn, const Jet1& a) {
  return compose_series(taylor_series(fn, a.value(), a.degree()), a);
}

Jet2 compose_analytic(AnalyticFn fn, const Jet2& a) {
  return compose_series(taylor_series(fn, a.value(), a.degree()), a);
}

}  // namespace geoweb
