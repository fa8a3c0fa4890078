#include <doctest.h>

#include <cmath>
#include <string>

#include "geoweb/errors.hpp"
#include "geoweb/gauge.hpp"

using namespace geoweb;

namespace {

WebSpec web(const std::string& f, Rect r) { return {Expression::parse(f), Expression::parse("0.5"), r}; }

GaugeOptions small() {
  GaugeOptions o;
  o.n = 129;
  o.check_grid = 32;
  return o;
}

}  // namespace

TEST_SUITE("gauge") {
  TEST_CASE("separable slope x / y") {
    const WebSpec s = web("exp(x*y)", {0.5, 1.5, 0.5, 1.5});
    const GaugeTable t = separate(s, {1, 1}, small());
    CHECK(t.separation_defect < 1e-10);
    CHECK(t.sign == 1.0);
    const GaugedWeb g = normalize(t, s, 33);
    CHECK(g.max_abs_w_deviation() < 1e-7);
    CHECK(g.max_abs_k_fd() < 1e-5);
    // X' = 1 / x and Y' = 1 / y, anchored at X(x0) = x0 and Y(y0) = y0
    for (double v : {0.6, 0.9, 1.4}) {
      CHECK(g.X(v) - g.X(1.0) == doctest::Approx(std::log(v)).epsilon(1e-8));
      CHECK(g.Y(v) - g.Y(1.0) == doctest::Approx(std::log(v)).epsilon(1e-8));
    }
  }

  TEST_CASE("constant slope is a rescaling") {
    const WebSpec s = web("x + 2*y", {0, 1, 0, 1});
    const GaugeTable t = separate(s, {0.5, 0.5}, small());
    CHECK(t.separation_defect == doctest::Approx(0.0));
    const GaugedWeb g = normalize(t, s, 17);
    CHECK(g.max_abs_w_deviation() < 1e-10);
    CHECK(g.X(0.9) - g.X(0.1) == doctest::Approx(0.4));
    // w = 2 is carried by u alone since v(y0) = 0
    CHECK(g.Y(0.9) - g.Y(0.1) == doctest::Approx(0.8));
  }

  TEST_CASE("normalized web is a fixed point") {
    const WebSpec s = web("x+y", {0, 1, 0, 1});
    const GaugeTable t = separate(s, {0.5, 0.5}, small());
    for (double u : t.u) CHECK(u == 0.0);
    for (double v : t.v) CHECK(v == 0.0);
    const GaugedWeb g = normalize(t, s, 17);
    CHECK(g.max_abs_w_deviation() == 0.0);
    CHECK(g.X(0.8) == doctest::Approx(0.8));
    CHECK(g.Y(0.2) == doctest::Approx(0.2));
  }

  TEST_CASE("maps are increasing") {
    const GaugeTable t = separate(web("exp(x*y)", {0.5, 1.5, 0.5, 1.5}), {1, 1}, small());
    for (std::size_t i = 1; i < t.X.size(); ++i) CHECK(t.X[i] > t.X[i - 1]);
    for (std::size_t i = 1; i < t.Y.size(); ++i) CHECK(t.Y[i] > t.Y[i - 1]);
  }

  TEST_CASE("negative slope") {
    const WebSpec s = web("x - y^2", {0.5, 1.5, 0.5, 1.5});
    const GaugeTable t = separate(s, {1, 1}, small());
    CHECK(t.sign == -1.0);
    CHECK(normalize(t, s, 17).max_abs_w_deviation() < 1e-7);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS((void)separate(web("x + y^2/x", {0.5, 1.5, 0.5, 1.5}), {1, 1}, small()), NotCurvatureFlat);
    CHECK_THROWS_AS((void)separate(web("x + y^2", {0.5, 1.5, -0.45, 0.7}), {1, 0.5}, small()), SignChange);
  }

  TEST_CASE("csv layout") {
    const GaugeTable t = separate(web("x+y", {0, 1, 0, 1}), {0.5, 0.5}, small());
    const std::string csv = gauge_csv(t, 'x');
    CHECK(csv.rfind("t,u_or_v,X_or_Y\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == t.xs.size() + 1);
  }
}
