#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "geoweb/errors.hpp"
#include "geoweb/families.hpp"
#include "geoweb/invariants.hpp"
#include "oracles.hpp"

using namespace geoweb;

namespace {

WebSpec web(const std::string& f, const std::string& a) { return {Expression::parse(f), Expression::parse(a), {}}; }

struct Case {
  const char* f;
  const char* a;
};

const std::vector<Case> kWebs = {
    {"x+y", "x/(x+y+3)"},         {"exp(x*y)", "0.3+0.1*x*y"}, {"x+y^2/x", "1/(2+x-y)"},
    {"x*y+x^3", "0.5*sin(x+2*y)"}, {"log(x+2*y)", "exp(-x-y)"}, {"x^2+y", "0.2+0.1*x^2"},
};

}  // namespace

TEST_SUITE("invariants") {
  TEST_CASE("trivial web") {
    const BaseJets b = base_jets(web("x+y", "0.5"), {0.3, 0.8});
    CHECK(b.w.value() == 1.0);
    for (int n = 1; n <= 3; ++n) {
      for (int i = 0; i <= n; ++i) CHECK(b.w.coeff(i, n - i) == 0.0);
    }
    CHECK(b.alpha.value() == 0.0);
    CHECK(b.k.value() == 0.0);
    const LiouvillePair l = liouville(web("x+y", "0.5"), {0.3, 0.8});
    CHECK(l.L1 == 0.0);
    CHECK(l.L2 == 0.0);
    CHECK(curvature(web("x+y", "0.5"), {0.3, 0.8}) == 0.0);
  }

  TEST_CASE("separable slope") {
    const BaseJets b = base_jets(web("exp(x*y)", "0.5"), {1, 1});
    CHECK(b.w.value() == doctest::Approx(1.0));
    CHECK(b.w.partial(1, 0) == doctest::Approx(1.0));
    CHECK(b.w.partial(0, 1) == doctest::Approx(-1.0));
    CHECK(std::abs(b.k.value()) < 1e-12);
    for (Point p : {Point{0.6, 1.3}, Point{1.4, 0.7}}) CHECK(std::abs(curvature(web("exp(x*y)", "0.5"), p)) < 1e-12);
  }

  TEST_CASE("curvature against differences") {
    const Expression f = Expression::parse("x + y^2/x");
    const double K = curvature({f, Expression::parse("0.5"), {}}, {1.3, 0.7});
    const double ref = static_cast<double>(oracle::fd_curvature(f, 1.3L, 0.7L));
    CHECK(std::abs(K) > 1e-3);
    CHECK(std::abs(K - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
  }

  TEST_CASE("curvature and k") {
    for (const auto& c : kWebs) {
      const WebSpec s = web(c.f, c.a);
      for (Point p : {Point{0.6, 0.9}, Point{1.1, 0.4}, Point{0.8, 1.3}}) {
        const Jet2 f = s.f.eval_jet(p, 3);
        const double k = base_jets(s, p).k.value();
        const double lhs = curvature(s, p) * f.partial(1, 0) * f.partial(0, 1);
        CAPTURE(c.f);
        CHECK(std::abs(lhs - k) <= 1e-10 * std::max(1.0, std::abs(k)));
      }
    }
  }

  TEST_CASE("each Liouville bracket against differences") {
    for (const auto& c : kWebs) {
      const WebSpec s = web(c.f, c.a);
      for (Point p : {Point{0.7, 0.9}, Point{1.2, 0.6}}) {
        const BaseJets b = base_jets(s, p);
        const LiouvilleTerms t = liouville_terms(b.alpha, b.w, b.k);
        const oracle::FdLiouville ref = oracle::fd_liouville(s.f, s.a, p.x, p.y);
        CAPTURE(c.f);
        CAPTURE(c.a);
        for (int i = 0; i < 4; ++i) {
          CAPTURE(i);
          const double r1 = static_cast<double>(ref.l1[static_cast<std::size_t>(i)]);
          const double r2 = static_cast<double>(ref.l2[static_cast<std::size_t>(i)]);
          const double scale1 = std::max(1.0, 3.0 * static_cast<double>(ref.scale1));
          const double scale2 = std::max(1.0, 3.0 * static_cast<double>(ref.scale2));
          CHECK(std::abs(t.l1[static_cast<std::size_t>(i)] - r1) < 1e-5 * scale1);
          CHECK(std::abs(t.l2[static_cast<std::size_t>(i)] - r2) < 1e-5 * scale2);
        }
      }
    }
  }

  TEST_CASE("grid route and jet route agree") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (int i = 0; i < 100; ++i) {
      const auto& c = kWebs[static_cast<std::size_t>(i) % kWebs.size()];
      const WebSpec s = web(c.f, c.a);
      const Point p{u(rng), u(rng)};
      const LiouvillePair direct = liouville(s, p);
      const BaseJets b = base_jets(s, p);
      const LiouvillePair via = liouville_from_alpha(b.alpha, b.w, b.k);
      CHECK(std::abs(direct.L1 - via.L1) < 1e-10);
      CHECK(std::abs(direct.L2 - via.L2) < 1e-10);
    }
  }

  TEST_CASE("reduction identity") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 50; ++i) {
      const Point p{0.1, 0.2};
      Jet2 a(p, 2);
      for (int n = 0; n <= 2; ++n) {
        for (int j = 0; j <= n; ++j) a.coeff(j, n - j) = u(rng);
      }
      const LiouvillePair l = liouville_from_alpha(a, Jet2::constant(1.0, p, 2), Jet2::constant(0.0, p, 1));
      const ResidualPair r = reduced_residuals(a);
      CHECK(std::abs(3 * l.L1 - r.first) < 1e-13);
      CHECK(std::abs(3 * l.L2 - r.second) < 1e-13);
    }
  }

  TEST_CASE("reduced system examples") {
    const Point p{1, 1};
    const ResidualPair c = reduced_residuals(Jet2::constant(2.5, p, 2));
    CHECK(c.first == 0.0);
    CHECK(c.second == 0.0);

    const auto [x, y] = variable_jets(p, 2);
    const ResidualPair r = reduced_residuals(x);
    CHECK(r.first == doctest::Approx(1.0));
    CHECK(r.second == doctest::Approx(2.0));

    const Jet2 t4 = alpha_eval(Type4{1.0}, {1, 0}, 2);
    const ResidualPair z = reduced_residuals(t4);
    CHECK(std::abs(z.first) < 1e-12);
    CHECK(std::abs(z.second) < 1e-12);

    const ResidualPair f = factored_residuals(Jet2::constant(-0.4, p, 3));
    CHECK(f.first == 0.0);
    CHECK(f.second == 0.0);
  }

  TEST_CASE("solutions give zero residuals") {
    const Point p{0.2, -0.1};
    const Jet2 t2 = alpha_eval(Type2{1.5, 0.2}, p, 2);
    const LiouvillePair l = liouville_from_alpha(t2, Jet2::constant(1.0, p, 2), Jet2::constant(0.0, p, 1));
    CHECK(std::abs(l.L1) < 1e-9);
    CHECK(std::abs(l.L2) < 1e-9);

    const Jet2 t1 = alpha_eval(Type1{1.0, 0.1, 0.3, -0.2}, p, 3);
    const ResidualPair f = factored_residuals(t1);
    const double scale = 1.0 + std::pow(std::abs(t1.value()), 3);
    CHECK(std::abs(f.first) < 1e-8 * scale);
    CHECK(std::abs(f.second) < 1e-8 * scale);
  }

  TEST_CASE("factored residuals are derivatives of the reduced ones") {
    // F1 = (d_x - 2 d_y) G with G = a_x + a^2/2; compare with differences of G
    const auto [x, y] = variable_jets({0.3, 0.1}, 3);
    const Jet2 a = x * x * y + sin(x) - y * 0.3;
    const ResidualPair f = factored_residuals(a);
    const auto G = [](double px, double py) {
      const auto [u, v] = variable_jets({px, py}, 1);
      const Jet2 b = u * u * v + sin(u) - v * 0.3;
      return b.partial(1, 0) + 0.5 * b.value() * b.value();
    };
    const double h = 1e-5;
    const double ref = (G(0.3 + h, 0.1) - G(0.3 - h, 0.1)) / (2 * h) - 2 * (G(0.3, 0.1 + h) - G(0.3, 0.1 - h)) / (2 * h);
    CHECK(f.first == doctest::Approx(ref).epsilon(1e-7));
  }

  TEST_CASE("degenerate points") {
    CHECK_THROWS_AS((void)base_jets(web("x+y", "1"), {0.5, 0.5}), DegenerateWeb);
    CHECK_THROWS_AS((void)base_jets(web("x", "0.5"), {0.5, 0.5}), DegenerateWeb);
    CHECK_THROWS_AS((void)base_jets(web("x+y", "x-y"), {0.5, 0.5}), DegenerateWeb);
  }
}
