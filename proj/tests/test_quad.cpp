#include "doctest.h"
#include "hypheat/quad.hpp"

using namespace hypheat;
using namespace hypheat::quad;

TEST_CASE("Gauss-Kronrod 7/15 nodes") {
  auto r = kronrod_rule_big(7, 128);
  REQUIRE(r->nodes.size() == 8);
  CHECK(std::fabs(r->nodes[0].x.to_double() - 0.991455371120812639206854697526329) < 1e-16);
  CHECK(std::fabs(r->nodes[0].wk.to_double() - 0.022935322010529224963732008058970) < 1e-16);
  CHECK(std::fabs(r->nodes[1].wg.to_double() - 0.129484966168869693270611432679082) < 1e-16);
}

TEST_CASE("Kronrod rule is exact to degree 3n+1") {
  for (int n : {5, 10, 15, 20}) {
    auto r = kronrod_rule_big(n, 200);
    const int deg = 3 * n + 1 - ((3 * n + 1) % 2);
    BigReal s(0.0, 200);
    for (const auto& nd : r->nodes) s += (nd.x.is_zero() ? 1.0 : 2.0) * nd.wk * pow(nd.x, deg);
    CHECK(abs(s - BigReal(2.0, 200) / (deg + 1.0)) < BigReal("1e-55", 200));
  }
}

TEST_CASE("finite intervals") {
  QuadOptions o;
  auto a = integrate_adaptive<double>([](double x) { return x * x; }, 0.0, 1.0, o, 53);
  CHECK(a.converged);
  CHECK(std::fabs(a.value - 1.0 / 3.0) < 1e-15);
  auto b = integrate_adaptive<double>([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, o, 53);
  CHECK(std::fabs(b.value - 2.0) < 1e-14);
  auto c = integrate_tanh_sinh<BigReal>([](const BigReal& x) { return exp(x); }, BigReal(0.0, 200), BigReal(1.0, 200),
                                        QuadOptions{0.0, 1e-50}, 200);
  CHECK(abs(c.value - (exp(BigReal(1.0, 200)) - 1.0)) < BigReal("1e-48", 200));
}

TEST_CASE("Beta prime integral, truncated") {
  QuadOptions o;
  o.rel_tol = 1e-13;
  auto r = integrate_semi_infinite<double>([](double v) { return 1.0 / ((1 + v) * (1 + v) * (1 + v)); }, 0.0, o, 53,
                                           [](double b) { return 0.5 / ((1 + b) * (1 + b)); });
  CHECK(r.converged);
  CHECK(std::fabs(r.value - 0.5) < 1e-12);
}

TEST_CASE("semi-infinite") {
  QuadOptions o;
  auto a = integrate_semi_infinite<double>([](double x) { return std::exp(-x); }, 0.0, o, 53,
                                           [](double b) { return std::exp(-b); });
  CHECK(std::fabs(a.value - 1.0) < 1e-12);
  auto b = integrate_semi_infinite<double>([](double x) { return x * std::exp(-x * x / 2); }, 0.0, o, 53);
  CHECK(std::fabs(b.value - 1.0) < 1e-12);
}

TEST_CASE("square-root endpoint singularity") {
  QuadOptions o;
  auto a = integrate_sqrt_singular<double>([](double u) { return std::exp(-u); }, o, 53);
  CHECK(std::fabs(a.value - std::sqrt(std::numbers::pi)) < 1e-12);
  auto b = integrate_sqrt_singular<double>([](double u) { return 1.0 / ((1 + u) * (1 + u)); }, o, 53,
                                           [](double s) { return 1.0 / (s * s * s); });
  CHECK(std::fabs(b.value - std::numbers::pi / 2) < 1e-11);
  auto c = integrate_sqrt_singular<double>([](double u) { return std::exp(-2 * u); }, o, 53);
  CHECK(std::fabs(c.value - std::sqrt(std::numbers::pi / 2)) < 1e-12);
}

static QuadResult int2(double tau, double theta, const PrecisionPolicy& p, OscillatoryOptions o = {}) {
  const BigReal ct = cosh(BigReal(theta, 512));
  return gruet_oscillatory(
      tau, [ct](const BigReal&, const BigReal& ch) { return 1.0 / (ch + BigReal(ct, ch.precision())); }, p, o,
      [theta](double rho) { return 1.0 / (std::cosh(rho) + std::cosh(theta)); });
}

TEST_CASE("oscillatory integral reproduces the Gaussian") {
  for (double tau : {0.5, 1.0, 2.0, 4.0}) {
    for (double theta : {0.2, 0.8, 2.0}) {
      auto r = int2(tau, theta, PrecisionPolicy::automatic(1e-12));
      const BigReal th(theta, 256);
      const BigReal exact = const_pi(256) * exp(-th * th / (2 * tau));
      const double rel = (abs(r.value - exact) / exact).to_double();
      CHECK(r.converged);
      CHECK(rel < 1e-11);
      CHECK(rel * exact.to_double() <= 10 * r.err_est + 1e-300);
      CHECK(r.cancellation_digits <= PrecisionPolicy::bits_to_digits(r.precision_bits) - 12);
    }
  }
}

TEST_CASE("oscillatory integral at large tau has no cancellation") {
  auto r = int2(50.0, 1.0, PrecisionPolicy::automatic(1e-12));
  CHECK(r.cancellation_digits < 1.0);
  CHECK(std::fabs(r.value.to_double() / (std::numbers::pi * std::exp(-1.0 / 100)) - 1) < 1e-12);
}

TEST_CASE("oscillatory integral at small tau escalates precision") {
  auto r = int2(0.1, 0.8, PrecisionPolicy::automatic(1e-10));
  CHECK(r.precision_bits > 150);
  CHECK(std::fabs(r.value.to_double() / (std::numbers::pi * std::exp(-3.2)) - 1) < 1e-10);
}

TEST_CASE("fixed precision too low throws") {
  CHECK_THROWS_AS(int2(0.2, 0.8, PrecisionPolicy::fixed(53)), PrecisionError);
}

TEST_CASE("tanh-sinh lobes agree") {
  OscillatoryOptions o;
  o.rule = QuadRule::tanh_sinh;
  auto r = int2(1.0, 0.8, PrecisionPolicy::automatic(1e-12), o);
  CHECK(std::fabs(r.value.to_double() / (std::numbers::pi * std::exp(-0.32)) - 1) < 1e-11);
}
