#pragma once

// The four closed-form families of alpha for which L1 = L2 = 0 in the
// normalized coordinates w = 1, k = 0 (3-subweb x, y, x + y):
//
//   t1  alpha = (P'(t) + P'(s)) / (P(t) - P(s)),  t = 2x + y + l1, s = x + 2y + l2
//   t2  alpha = k (e^{k(x-y+C)} + 1) / (e^{k(x-y+C)} - 1)
//   t3  alpha = -k tan(k (x - y + C) / 2)
//   t4  alpha = 2 / (x - y + C)
//
// t1 and t3 also carry the alternative `corrected = false` spellings:
// alpha = (P'(t; g2, g3) - P'(s; g2, -g3)) / (P(t; g2, g3) - P(s; g2, -g3))
// and alpha = -k tan((x - y + C) / 2). Neither solves the system in general;
// they are kept so that can be demonstrated.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geoweb/invariants.hpp"
#include "geoweb/jet.hpp"
#include "geoweb/weierstrass.hpp"

namespace geoweb {

struct Type1 {
  double g2 = 0.0;
  double g3 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool corrected = true;
};

struct Type2 {
  double k = 1.0;
  double C = 0.0;
};

struct Type3 {
  double k = 1.0;
  double C = 0.0;
  bool corrected = true;
};

struct Type4 {
  double C = 0.0;
};

using FamilySpec = std::variant<Type1, Type2, Type3, Type4>;

enum class FamilyTag { t1, t2, t3, t4 };

FamilyTag tag_of(const FamilySpec& fam);
const char* to_string(FamilyTag tag);
std::optional<FamilyTag> parse_family_tag(std::string_view text);

/// Throws InputError for k = 0 in t2/t3.
void validate(const FamilySpec& fam);

/// Singular-locus tolerances.
inline constexpr double kType1DenominatorGuard = 1e-8;
inline constexpr double kFamilyPoleGuard = 1e-10;

/// alpha as a jet of the given degree (<= 4). Throws FamilySingularity and
/// the Weierstrass errors.
Jet2 alpha_eval(const FamilySpec& fam, Point p, int degree);

/// Invariants of the two Weierstrass lines for t1: P on each line.
WpParams type1_t_params(const Type1& fam);
WpParams type1_s_params(const Type1& fam);

/// A = 6 P(t) and B = -6 P(s) with derivatives along their own line parameter.
struct AbValues {
  double A = 0.0, dA = 0.0, d2A = 0.0;
  double B = 0.0, dB = 0.0, d2B = 0.0;
};

AbValues ab_eval(const Type1& fam, Point p);

/// (A + B) alpha - (A' - B').
double ab_compatibility(const Type1& fam, Point p);

/// The constant v of alpha' + alpha^2/2 = v: k^2/2, -k^2/2, 0 for t2, t3, t4.
double riccati_constant(const FamilySpec& fam);

/// alpha'(xi) + alpha(xi)^2/2 - v for the one-variable families t2..t4, with
/// xi = x - y. Throws InputError for t1.
double riccati_residual(const FamilySpec& fam, double xi);

/// alpha of a one-variable family (t2..t4) as a Jet1 in xi = x - y.
Jet1 alpha_of_xi(const FamilySpec& fam, const Jet1& xi);

/// A family packaged as invariant data in normalized coordinates:
/// w = 1, k = 0, alpha supplied by the family.
class NormalizedWeb {
 public:
  explicit NormalizedWeb(FamilySpec fam) : fam_(std::move(fam)) {}

  const FamilySpec& family() const { return fam_; }
  Jet2 w(Point p, int degree) const { return Jet2::constant(1.0, p, degree); }
  Jet2 k(Point p, int degree) const { return Jet2::constant(0.0, p, degree); }
  Jet2 alpha(Point p, int degree) const { return alpha_eval(fam_, p, degree); }
  LiouvillePair liouville(Point p) const;

 private:
  FamilySpec fam_;
};

NormalizedWeb alpha_to_web(const FamilySpec& fam);

std::string describe(const FamilySpec& fam);

/// Named parameters in declaration order, e.g. {{"k", 1.5}, {"C", 0.2}}.
/// The `corrected` flag is reported as 1 or 0.
std::vector<std::pair<std::string, double>> parameters(const FamilySpec& fam);

/// Builds a family from named parameters; missing ones keep their defaults
/// (k = 1, everything else 0, corrected = 1). Throws InputError for unknown
/// names and for k = 0.
FamilySpec make_family(FamilyTag tag, const std::vector<std::pair<std::string, double>>& params);

}  // namespace geoweb
