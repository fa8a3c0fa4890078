#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "geoweb/errors.hpp"
#include "geoweb/expr.hpp"
#include "oracles.hpp"

using namespace geoweb;

namespace {

const std::vector<std::string> kCorpus = {
    "x+y", "x*y/(x+y)", "x^2*y", "exp(x*y)", "sin(x)*cos(y)", "log(x+2)-y^3", "sqrt(x^2+y^2+1)",
    "tanh(x-y)", "x^2.5", "-x+3*y", "1/(1+x*x+y*y)", "sinh(x)*cosh(y)", "tan(0.3*x+0.2*y)", "2^x", "pi*x-e*y",
};

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("parse builds the expected trees") {
    const Node& sum = Expression::parse("x+y").root();
    CHECK(sum.kind == NodeKind::add);
    CHECK(sum.lhs->kind == NodeKind::variable);
    CHECK(sum.lhs->variable == 'x');
    CHECK(sum.rhs->variable == 'y');

    const Node& q = Expression::parse("x*y/(x+y)").root();
    REQUIRE(q.kind == NodeKind::div);
    CHECK(q.lhs->kind == NodeKind::mul);
    CHECK(q.rhs->kind == NodeKind::add);
  }

  TEST_CASE("syntax errors carry the offset") {
    try {
      (void)Expression::parse("sin(");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS((void)Expression::parse("x+"), SyntaxError);
    CHECK_THROWS_AS((void)Expression::parse("foo(x)"), SyntaxError);
    CHECK_THROWS_AS((void)Expression::parse("x y"), SyntaxError);
  }

  TEST_CASE("print round-trips through parse") {
    for (const auto& text : kCorpus) {
      CAPTURE(text);
      const Expression e = Expression::parse(text);
      CHECK(Expression::parse(e.print()) == e);
    }
  }

  TEST_CASE("polynomial jet") {
    const Jet2 j = Expression::parse("x^2*y").eval_jet({1, 2}, 2);
    CHECK(j.value() == doctest::Approx(2));
    CHECK(j.partial(1, 0) == doctest::Approx(4));
    CHECK(j.partial(0, 1) == doctest::Approx(1));
    CHECK(j.partial(1, 1) == doctest::Approx(2));
    CHECK(j.partial(2, 0) == doctest::Approx(4));
    CHECK(j.partial(0, 2) == doctest::Approx(0));
  }

  TEST_CASE("linear jet has no higher terms") {
    const Jet2 j = Expression::parse("x+y").eval_jet({0.3, -1.2}, 4);
    CHECK(j.value() == doctest::Approx(-0.9));
    CHECK(j.partial(1, 0) == 1.0);
    CHECK(j.partial(0, 1) == 1.0);
    for (int n = 2; n <= 4; ++n) {
      for (int i = 0; i <= n; ++i) CHECK(j.coeff(i, n - i) == 0.0);
    }
  }

  TEST_CASE("exp(x*y) partials match differences") {
    const Expression e = Expression::parse("exp(x*y)");
    const Jet2 j = e.eval_jet({0.7, -0.3}, 4);
    const auto g = oracle::field_of(e);
    for (int n = 0; n <= 4; ++n) {
      for (int i = 0; i <= n; ++i) {
        // the h/4 stencil of a fourth difference at 1e-3 is dominated by rounding
        const long double h = n == 4 ? 1e-2L : 1e-3L;
        const double ref = static_cast<double>(oracle::fd_partial(g, 0.7L, -0.3L, i, n - i, h));
        CAPTURE(i);
        CAPTURE(n - i);
        CHECK(std::abs(j.partial(i, n - i) - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
      }
    }
  }

  TEST_CASE("corpus jets to degree 3 match differences") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.2, 1.2);
    double worst = 0.0;
    for (const auto& text : kCorpus) {
      const Expression e = Expression::parse(text);
      const auto g = oracle::field_of(e);
      for (int trial = 0; trial < 100; ++trial) {
        const Point p{u(rng), u(rng)};
        Jet2 j;
        try {
          j = e.eval_jet(p, 3);
        } catch (const NumericalError&) {
          continue;
        }
        for (int n = 0; n <= 3; ++n) {
          for (int i = 0; i <= n; ++i) {
            const double ref = static_cast<double>(oracle::fd_coefficient(g, p.x, p.y, i, n - i));
            worst = std::max(worst, std::abs(j.coeff(i, n - i) - ref) / std::max(1.0, std::abs(ref)));
          }
        }
      }
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS((void)Expression::parse("log(x)").eval_jet({-1, 0}, 1), EvalDomainError);
    CHECK_THROWS_AS((void)Expression::parse("x^0.5").eval_jet({-1, 0}, 1), EvalDomainError);
    CHECK_THROWS_AS((void)Expression::parse("1/x").eval_jet({0, 1}, 1), NumericalError);
  }

  TEST_CASE("scalar and jet evaluation agree") {
    const Expression e = Expression::parse("sin(x)*cos(y)+x^3");
    CHECK(e.eval(0.4, 0.9) == doctest::Approx(e.eval_jet({0.4, 0.9}, 0).value()).epsilon(1e-14));
  }
}
