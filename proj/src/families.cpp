#include "geoweb/families.hpp"

#include <cmath>
#include <sstream>

#include "geoweb/errors.hpp"

namespace geoweb {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void singular(const std::string& what, double where) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (x - y + C = " << where << ")";
  throw FamilySingularity(os.str());
}

// alpha for the one-variable families, generic over Jet1 / Jet2.
template <typename J>
J alpha_xi_generic(const FamilySpec& fam, const J& xi) {
  using std::abs;
  return std::visit(
      overloaded{
          [&](const Type1&) -> J { throw InputError("t1 is not a function of x - y"); },
          [&](const Type2& f) -> J {
            const J z = xi + f.C;
            const J e = exp(z * f.k);
            if (abs(e.value() - 1.0) <= kFamilyPoleGuard) singular("t2 pole", z.value());
            return (e + 1.0) * f.k / (e - 1.0);
          },
          [&](const Type3& f) -> J {
            const J z = xi + f.C;
            const J arg = f.corrected ? z * (0.5 * f.k) : z * 0.5;
            if (abs(std::cos(arg.value())) <= kFamilyPoleGuard) singular("t3 pole", z.value());
            return tan(arg) * (-f.k);
          },
          [&](const Type4& f) -> J {
            const J z = xi + f.C;
            if (abs(z.value()) <= kFamilyPoleGuard) singular("t4 pole", z.value());
            return 2.0 / z;
          },
      },
      fam);
}

struct LineSeries {
  Series wp{};
  Series dwp{};
  WpParams params;
};

LineSeries line_series(double t0, WpParams params, int degree) {
  const auto r = wp_pair(Jet1::variable(t0, degree), params);
  LineSeries s;
  s.params = params;
  for (int k = 0; k <= degree; ++k) {
    s.wp[k] = r.wp[k];
    s.dwp[k] = r.dwp[k];
  }
  return s;
}

// Taylor coefficients of zeta at t0 from those of P, using zeta' = -P.
// `line` must hold P to at least degree - 1.
Series zeta_series(double t0, const LineSeries& line, int degree) {
  Series z{};
  z[0] = wp_zeta(t0, line.params);
  for (int k = 1; k <= degree; ++k) z[k] = -line.wp[k - 1] / k;
  return z;
}

Jet2 type1_alpha(const Type1& f, Point p, int degree) {
  const auto [x, y] = variable_jets(p, degree);
  const Jet2 t = x * 2.0 + y + f.lambda1;
  const Jet2 s = x + y * 2.0 + f.lambda2;
  const LineSeries ts = line_series(t.value(), type1_t_params(f), degree);
  const LineSeries ss = line_series(s.value(), type1_s_params(f), degree);
  const Jet2 pt = compose_series(ts.wp, t), dpt = compose_series(ts.dwp, t);
  const Jet2 ps = compose_series(ss.wp, s), dps = compose_series(ss.dwp, s);
  const Jet2 den = pt - ps;
  if (std::abs(den.value()) <= kType1DenominatorGuard) {
    std::ostringstream os;
    os.precision(17);
    os << "t1 denominator P(t) - P(s) = " << den.value() << " at (" << p.x << ", " << p.y << ")";
    throw FamilySingularity(os.str());
  }
  if (!f.corrected) return (dpt - dps) / den;
  // Addition theorem: (P'(t) + P'(s)) / (P(t) - P(s)) = 2 (zeta(t - s) - zeta(t) + zeta(s)).
  // The quotient is 0/0 along s = -t (mod periods); the zeta form only has the pole t = s.
  const WpParams params = type1_t_params(f);
  const Jet2 d = t - s;
  const LineSeries ds = line_series(d.value(), params, std::max(degree - 1, 0));
  const Jet2 zd = compose_series(zeta_series(d.value(), ds, degree), d);
  const Jet2 zt = compose_series(zeta_series(t.value(), ts, degree), t);
  const Jet2 zs = compose_series(zeta_series(s.value(), ss, degree), s);
  return (zd - zt + zs) * 2.0;
}

}  // namespace

FamilyTag tag_of(const FamilySpec& fam) { return static_cast<FamilyTag>(fam.index()); }

const char* to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::t1: return "t1";
    case FamilyTag::t2: return "t2";
    case FamilyTag::t3: return "t3";
    case FamilyTag::t4: return "t4";
  }
  return "?";
}

std::optional<FamilyTag> parse_family_tag(std::string_view text) {
  if (text == "t1") return FamilyTag::t1;
  if (text == "t2") return FamilyTag::t2;
  if (text == "t3") return FamilyTag::t3;
  if (text == "t4") return FamilyTag::t4;
  return std::nullopt;
}

void validate(const FamilySpec& fam) {
  std::visit(overloaded{
                 [](const Type1& f) {
                   if (!std::isfinite(f.g2) || !std::isfinite(f.g3) || !std::isfinite(f.lambda1) ||
                       !std::isfinite(f.lambda2)) {
                     throw InputError("t1 parameters must be finite");
                   }
                 },
                 [](const Type2& f) {
                   if (f.k == 0.0 || !std::isfinite(f.k)) throw InputError("t2 needs k != 0 (k = 0 is t4)");
                 },
                 [](const Type3& f) {
                   if (f.k == 0.0 || !std::isfinite(f.k)) throw InputError("t3 needs k != 0 (k = 0 is t4)");
                 },
                 [](const Type4& f) {
                   if (!std::isfinite(f.C)) throw InputError("t4 needs a finite C");
                 },
             },
             fam);
}

WpParams type1_t_params(const Type1& f) { return {f.g2, f.g3}; }
WpParams type1_s_params(const Type1& f) { return {f.g2, f.corrected ? f.g3 : -f.g3}; }

Jet2 alpha_eval(const FamilySpec& fam, Point p, int degree) {
  validate(fam);
  if (const auto* t1 = std::get_if<Type1>(&fam)) return type1_alpha(*t1, p, degree);
  const auto [x, y] = variable_jets(p, degree);
  return alpha_xi_generic(fam, x - y);
}

Jet1 alpha_of_xi(const FamilySpec& fam, const Jet1& xi) {
  validate(fam);
  return alpha_xi_generic(fam, xi);
}

AbValues ab_eval(const Type1& f, Point p) {
  const double t = 2.0 * p.x + p.y + f.lambda1;
  const double s = p.x + 2.0 * p.y + f.lambda2;
  const LineSeries ts = line_series(t, type1_t_params(f), 2);
  const LineSeries ss = line_series(s, type1_s_params(f), 2);
  AbValues v;
  v.A = 6.0 * ts.wp[0];
  v.dA = 6.0 * ts.dwp[0];
  v.d2A = 6.0 * 2.0 * ts.wp[2];
  v.B = -6.0 * ss.wp[0];
  v.dB = -6.0 * ss.dwp[0];
  v.d2B = -6.0 * 2.0 * ss.wp[2];
  return v;
}

double ab_compatibility(const Type1& f, Point p) {
  const AbValues v = ab_eval(f, p);
  if (std::abs(v.A + v.B) <= kType1DenominatorGuard) throw FamilySingularity("A + B vanishes");
  const double alpha = alpha_eval(f, p, 0).value();
  return (v.A + v.B) * alpha - (v.dA - v.dB);
}

double riccati_constant(const FamilySpec& fam) {
  return std::visit(overloaded{
                        [](const Type1&) -> double { throw InputError("t1 has no Riccati constant"); },
                        [](const Type2& f) { return 0.5 * f.k * f.k; },
                        [](const Type3& f) { return -0.5 * f.k * f.k; },
                        [](const Type4&) { return 0.0; },
                    },
                    fam);
}

double riccati_residual(const FamilySpec& fam, double xi) {
  const Jet1 a = alpha_of_xi(fam, Jet1::variable(xi, 1));
  return a[1] + 0.5 * a.value() * a.value() - riccati_constant(fam);
}

LiouvillePair NormalizedWeb::liouville(Point p) const {
  return liouville_from_alpha(alpha(p, 2), w(p, 2), k(p, 1));
}

NormalizedWeb alpha_to_web(const FamilySpec& fam) { return NormalizedWeb(fam); }

std::string describe(const FamilySpec& fam) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Type1& f) {
                   os << "t1(g2=" << f.g2 << ", g3=" << f.g3 << ", lambda1=" << f.lambda1
                      << ", lambda2=" << f.lambda2 << (f.corrected ? "" : ", printed") << ")";
                 },
                 [&](const Type2& f) { os << "t2(k=" << f.k << ", C=" << f.C << ")"; },
                 [&](const Type3& f) {
                   os << "t3(k=" << f.k << ", C=" << f.C << (f.corrected ? "" : ", printed") << ")";
                 },
                 [&](const Type4& f) { os << "t4(C=" << f.C << ")"; },
             },
             fam);
  return os.str();
}

std::vector<std::pair<std::string, double>> parameters(const FamilySpec& fam) {
  return std::visit(
      overloaded{
          [](const Type1& f) -> std::vector<std::pair<std::string, double>> {
            return {{"g2", f.g2}, {"g3", f.g3}, {"lambda1", f.lambda1}, {"lambda2", f.lambda2},
                    {"corrected", f.corrected ? 1.0 : 0.0}};
          },
          [](const Type2& f) -> std::vector<std::pair<std::string, double>> { return {{"k", f.k}, {"C", f.C}}; },
          [](const Type3& f) -> std::vector<std::pair<std::string, double>> {
            return {{"k", f.k}, {"C", f.C}, {"corrected", f.corrected ? 1.0 : 0.0}};
          },
          [](const Type4& f) -> std::vector<std::pair<std::string, double>> { return {{"C", f.C}}; },
      },
      fam);
}

FamilySpec make_family(FamilyTag tag, const std::vector<std::pair<std::string, double>>& params) {
  FamilySpec fam;
  switch (tag) {
    case FamilyTag::t1: fam = Type1{}; break;
    case FamilyTag::t2: fam = Type2{}; break;
    case FamilyTag::t3: fam = Type3{}; break;
    case FamilyTag::t4: fam = Type4{}; break;
  }
  for (const auto& [name, value] : params) {
    const bool known = std::visit(
        overloaded{
            [&](Type1& f) {
              if (name == "g2") f.g2 = value;
              else if (name == "g3") f.g3 = value;
              else if (name == "lambda1") f.lambda1 = value;
              else if (name == "lambda2") f.lambda2 = value;
              else if (name == "corrected") f.corrected = value != 0.0;
              else return false;
              return true;
            },
            [&](Type2& f) {
              if (name == "k") f.k = value;
              else if (name == "C") f.C = value;
              else return false;
              return true;
            },
            [&](Type3& f) {
              if (name == "k") f.k = value;
              else if (name == "C") f.C = value;
              else if (name == "corrected") f.corrected = value != 0.0;
              else return false;
              return true;
            },
            [&](Type4& f) {
              if (name != "C") return false;
              f.C = value;
              return true;
            },
        },
        fam);
    if (!known) throw InputError("unknown parameter '" + name + "' for family " + to_string(tag));
  }
  validate(fam);
  return fam;
}

}  // namespace geoweb
