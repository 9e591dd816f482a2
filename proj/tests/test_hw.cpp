#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypheat/hw.hpp"
#include "hypheat/quad.hpp"
#include "hypheat/specfun.hpp"

using namespace hypheat;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("u(1,1) is positive") {
  const BigReal u = hw::hw_density(1.0, 1.0, PrecisionPolicy::automatic());
  CHECK(u.sign() > 0);
  CHECK(u.to_double() == doctest::Approx(0.739076531303232).epsilon(1e-12));
}

TEST_CASE("grid matches independent calls") {
  const auto prec = PrecisionPolicy::automatic();
  const auto one = hw::hw_grid(1.0, {0.7}, prec);
  REQUIRE(one.size() == 1);
  CHECK(one[0].to_double() == hw::hw_density(1.0, 0.7, prec).to_double());

  const std::vector<double> ys{0.5, 1.25, 3.0};
  const auto g = hw::hw_grid(1.0, ys, prec, 3);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CHECK(g[i].to_double() == hw::hw_density(1.0, ys[i], prec).to_double());
  }
}

TEST_CASE("cache returns the fresh value at the quantized key") {
  hw::HWEvaluator ev(1.0, PrecisionPolicy::automatic());
  const BigReal a = ev.density(2.0);
  const BigReal b = ev.density(2.0 * (1.0 + 1e-15));
  CHECK(ev.cache_size() == 1);
  CHECK(ev.cache_hits() == 1);
  CHECK(a.to_double() == b.to_double());
  hw::HWEvaluator fresh(1.0, PrecisionPolicy::automatic(), false);
  CHECK(fresh.density(2.0).to_double() == a.to_double());
}

TEST_CASE("monotone tail for large y") {
  hw::HWEvaluator ev(1.0, PrecisionPolicy::automatic());
  double prev = ev.density_double(20.0);
  for (double y = 22.0; y <= 50.0; y += 4.0) {
    const double v = ev.density_double(y);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("small-y decay beats every power up to 5") {
  hw::HWEvaluator ev(1.0, PrecisionPolicy::automatic());
  for (int n = 1; n <= 5; ++n) {
    double prev = INFINITY;
    for (double y : {0.01, 0.003, 1e-3, 3e-4, 1e-4}) {
      const double q = ev.density_double(y) / std::pow(y, n);
      CHECK(q < prev);
      prev = q;
    }
    CHECK(prev < 1e-2);
  }
}

TEST_CASE("positivity across the validated range") {
  for (double t : {0.1, 1.0, 10.0}) {
    hw::HWEvaluator ev(t, PrecisionPolicy::automatic());
    for (double y : {1.0, 10.0, 50.0}) CHECK(ev.density(y).sign() > 0);
  }
  hw::HWEvaluator ev(2.0, PrecisionPolicy::automatic());
  CHECK(ev.density(1e-3).sign() > 0);
}

TEST_CASE("t below t_min is rejected unless the limit is lowered") {
  CHECK_THROWS_AS(hw::hw_density(0.05, 1.0, PrecisionPolicy::automatic()), DomainError);
  CHECK_THROWS_AS(hw::hw_density(1.0, -1.0, PrecisionPolicy::automatic()), DomainError);
  const BigReal v = hw::hw_density(0.09, 5.0, PrecisionPolicy::automatic().with_t_min(0.05));
  CHECK(v.sign() > 0);
}

TEST_CASE("fixed double precision at small t reports the required precision") {
  CHECK_THROWS_AS(hw::hw_density(0.2, 1.0, PrecisionPolicy::fixed(53)), PrecisionError);
}

TEST_CASE("e^{-y} u(1,y)/y integrates to 1/sqrt(2 pi)") {
  hw::HWEvaluator ev(1.0, PrecisionPolicy::automatic().with_tol(1e-14));
  auto f = [&](double y) { return std::exp(-y) * ev.density_double(y) / y; };
  quad::QuadOptions o;
  o.rel_tol = 1e-12;
  const auto lo = quad::integrate_lower_truncated<double>(f, 0.5, 1.0, o, 53);
  const auto hi = quad::integrate_semi_infinite<double>(f, 1.0, o, 53);
  CHECK(rel(lo.value + hi.value, 1.0 / std::sqrt(2.0 * std::numbers::pi)) <= 1e-10);
}

TEST_CASE("Yor joint and conditional densities") {
  const auto prec = PrecisionPolicy::automatic();
  hw::HWEvaluator ev(1.0, prec);
  const double theta = 0.4;
  const double s = 0.8;
  const double joint = hw::yor_joint_density(1.0, s, theta, prec).to_double();
  const double cond = hw::yor_density(ev, s, theta).to_double();
  const double gauss = std::exp(-theta * theta / 2.0) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(rel(cond * gauss, joint) <= 1e-13);
  CHECK(cond > 0.0);
  CHECK(hw::yor_density(ev, 1e4, 0.0).to_double() < 1e-3);
}
