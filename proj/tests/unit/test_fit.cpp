#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "geoweb/errors.hpp"
#include "geoweb/fit.hpp"

using namespace geoweb;

namespace {

// n x n cell-centred samples of the family on [lo, hi]^2
std::vector<AlphaSample> grid(const FamilySpec& fam, double lo, double hi, int n) {
  std::vector<AlphaSample> s;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = lo + (hi - lo) * (i + 0.5) / n, y = lo + (hi - lo) * (j + 0.5) / n;
      s.push_back({x, y, alpha_eval(fam, {x, y}, 0).value()});
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("type 4 is recovered exactly") {
    const FitResult r = fit_family(grid(Type4{0.7}, 0, 1, 6), FamilyTag::t4);
    REQUIRE(tag_of(r.family) == FamilyTag::t4);
    CHECK(std::abs(std::get<Type4>(r.family).C - 0.7) < 1e-10);
    CHECK(r.converged);
  }

  TEST_CASE("type 2 is recovered") {
    // 40 points
    std::vector<AlphaSample> s = grid(Type2{1.5, 0.2}, -0.5, 0.5, 7);
    s.resize(40);
    const FitResult r = fit_family(s, FamilyTag::t2);
    const auto& f = std::get<Type2>(r.family);
    CHECK(std::abs(f.k - 1.5) < 1e-6);
    CHECK(std::abs(f.C - 0.2) < 1e-6);
    CHECK(r.rms_residual < 1e-9);
  }

  TEST_CASE("a non-solution fits nothing") {
    std::vector<AlphaSample> s;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) s.push_back({0.2 * i, 0.2 * j, 0.2 * i});
    }
    for (FamilyTag t : {FamilyTag::t1, FamilyTag::t2, FamilyTag::t3, FamilyTag::t4}) {
      CAPTURE(to_string(t));
      CHECK(fit_family(s, t).rms_residual >= 0.1);
    }
    CHECK_FALSE(classify(s).has_value());
  }

  TEST_CASE("type 3 is identified") {
    const auto r = classify(grid(Type3{2.0, 0.3}, -0.4, 0.4, 6));
    REQUIRE(r.has_value());
    CHECK(tag_of(r->family) == FamilyTag::t3);
    const auto& f = std::get<Type3>(r->family);
    CHECK(f.k == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.C == doctest::Approx(0.3).epsilon(1e-6));
  }

  TEST_CASE("degenerate type 1") {
    const auto r = classify(grid(Type1{0, 0, 0.3, -0.2}, 0.2, 0.6, 6));
    REQUIRE(r.has_value());
    const FamilyTag t = tag_of(r->family);
    MESSAGE("degenerate lattice classified as " << std::string(to_string(t)) << ": " << describe(r->family));
    CHECK((t == FamilyTag::t1 || t == FamilyTag::t4));
    if (t == FamilyTag::t1) CHECK(degenerate_lattice(r->family));
  }

  TEST_CASE("too few samples") {
    auto s = grid(Type4{0.7}, 0, 1, 2);
    CHECK_THROWS_AS((void)fit_family(s, FamilyTag::t4), InsufficientSamples);
    CHECK_THROWS_AS((void)classify(s), InsufficientSamples);
    s = grid(Type4{0.7}, 0, 1, 3);
    s[0].alpha = NAN;
    CHECK_THROWS_AS((void)fit_family(s, FamilyTag::t4), InputError);
  }

  TEST_CASE("sample order does not matter") {
    auto s = grid(Type2{0.8, -0.3}, -0.5, 0.5, 5);
    const FitResult a = fit_family(s, FamilyTag::t2);
    std::mt19937_64 rng(51);
    std::shuffle(s.begin(), s.end(), rng);
    const FitResult b = fit_family(s, FamilyTag::t2);
    // samples are put in a canonical order first, so the results are identical
    CHECK(std::get<Type2>(a.family).k == std::get<Type2>(b.family).k);
    CHECK(std::get<Type2>(a.family).C == std::get<Type2>(b.family).C);
    CHECK(a.rms_residual == b.rms_residual);
    CHECK(a.iterations == b.iterations);
  }

  TEST_CASE("small noise") {
    auto s = grid(Type2{1.2, 0.1}, -0.5, 0.5, 6);
    std::mt19937_64 rng(52);
    std::normal_distribution<double> noise(0.0, 1e-8);
    for (auto& p : s) p.alpha += noise(rng);
    const auto r = classify(s);
    REQUIRE(r.has_value());
    CHECK(tag_of(r->family) == FamilyTag::t2);
    CHECK(r->rms_residual < 1e-7);
    const auto& f = std::get<Type2>(r->family);
    CHECK(std::abs(f.k - 1.2) < 1e-4);
    CHECK(std::abs(f.C - 0.1) < 1e-4);
  }

  TEST_CASE("canonical parameters") {
    const auto a = std::get<Type2>(canonical_parameters(Type2{-1.5, 0.2}));
    CHECK(a.k == 1.5);
    const auto b = std::get<Type3>(canonical_parameters(Type3{2.0, 0.3 + 2 * M_PI / 2.0}));
    CHECK(b.C == doctest::Approx(0.3));
    CHECK(collapses_to_difference(grid(Type4{0.7}, 0, 1, 4)));
  }
}
