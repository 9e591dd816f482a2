#include "doctest.h"
#include "hypheat/symop.hpp"

#include <functional>

using namespace hypheat;
using namespace hypheat::symop;

static double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
static const auto kAuto = PrecisionPolicy::automatic(1e-14);

TEST_CASE("Gaussian seed") {
  const auto s = seed_gaussian();
  CHECK(s.size() == 1);
  CHECK(eval_termsum(s, 0.0, 1.0, kAuto).to_double() == 1.0);
  CHECK(rel(eval_termsum(s, 1.0, 1.0, kAuto).to_double(), std::exp(-0.5)) < 1e-15);
  CHECK(rel(eval_termsum(s, 2.0, 1.0, kAuto).to_double(), std::exp(-2.0)) < 1e-15);
}

TEST_CASE("even-dimension seed") {
  const auto s = seed_even_dim();
  REQUIRE(s.size() == 1);
  const auto t = s.terms().front();
  CHECK(t.coeff == mpq_class(1, 2));
  CHECK((t.a == 1 && t.q == 0 && t.b == -1 && t.c == -1));
  CHECK(rel(eval_termsum_limit(s, 0.0, 1.0, kAuto).to_double(), 1.0) < 1e-15);
  CHECK(rel(eval_termsum(s, 1.0, 2.0, kAuto).to_double(), std::exp(-0.25) / std::sinh(1.0)) < 1e-15);
  CHECK_THROWS_AS(eval_termsum(s, 0.0, 1.0, kAuto), SingularEvaluationError);
}

TEST_CASE("one application, exact terms") {
  CHECK(apply_d_full(seed_gaussian(), 0) == seed_gaussian());
  CHECK(apply_d_half(seed_gaussian(), 0) == seed_gaussian());
  const auto f = apply_d_full(seed_gaussian(), 1);
  CHECK(f == TermSum({HypTerm{mpq_class(1, 2), 1, 1, -1, -1}}));
  const auto h = apply_d_half(seed_gaussian(), 1);
  CHECK(h == TermSum({HypTerm{1, 1, 1, -1, 0}}));
  CHECK(rel(eval_termsum(f, 1.0, 1.0, kAuto).to_double(), std::exp(-0.5) / std::sinh(1.0)) < 1e-15);
}

TEST_CASE("linearity") {
  TermSum two = seed_gaussian();
  two.add(seed_even_dim());
  TermSum expect = apply_d_full(seed_gaussian(), 2);
  expect.add(apply_d_full(seed_even_dim(), 2));
  CHECK(apply_d_full(two, 2) == expect);
}

TEST_CASE("mixed application stays rational and finite") {
  const auto s = apply_d_full(apply_d_half(seed_gaussian(), 2), 1);
  CHECK(!s.empty());
  for (const auto& t : s.terms()) CHECK(t.coeff.get_den() > 0);
  CHECK(std::isfinite(eval_termsum(s, 1.0, 1.0, kAuto).to_double()));
}

TEST_CASE("closure bounds and canonical form") {
  for (int m = 0; m <= 12; ++m) {
    const auto s = apply_d_full(seed_gaussian(), m);
    for (const auto& t : s.terms()) {
      CHECK(t.q <= m);
      CHECK(t.a <= m);
      CHECK(t.b >= -(2 * m + 1));
      CHECK(t.coeff != 0);
    }
    CHECK(canonicalize(s.terms()) == s);
  }
}

TEST_CASE("pretty printer") {
  CHECK(apply_d_full(seed_gaussian(), 1).to_string() == "1/2 * x^1 * t^-1 * sh^-1 * ch^-1 * G");
  const auto two = apply_d_half(seed_gaussian(), 2).to_string();
  CHECK(two == "-1 * x^0 * t^-1 * sh^-2 * ch^0 * G\n"
               "1/2 * x^1 * t^-1 * sh^-3 * ch^1 * G\n"
               "1 * x^2 * t^-2 * sh^-2 * ch^0 * G");
}

TEST_CASE("finite-difference agreement") {
  const int bits = 256;
  const BigReal h("1e-4", bits);
  for (int m = 1; m <= 3; ++m) {
    const auto s = apply_d_full(seed_gaussian(), m);
    for (double x : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const BigReal T(t, bits);
        std::function<BigReal(const BigReal&, int)> nested = [&](const BigReal& y, int k) -> BigReal {
          if (k == 0) return exp(-(y * y) / (T * 2.0));
          return -(nested(y + h, k - 1) - nested(y - h, k - 1)) / (h * 2.0) / sinh(y);
        };
        const double fd = nested(BigReal(x, bits), m).to_double();
        CHECK(rel(eval_termsum(s, x, t, kAuto).to_double(), fd) < 1e-5);
      }
    }
  }
}

TEST_CASE("small arguments escalate precision") {
  const auto s = apply_d_full(seed_gaussian(), 4);
  TermEvaluator ev(s);
  const BigReal a = ev.eval_auto(1e-3, 1.0, 1e-12);
  const BigReal b = ev.eval<BigReal>(BigReal(1e-3, 600), BigReal(1.0, 600), 600);
  CHECK(rel(a.to_double(), b.to_double()) < 1e-12);
  // limit at 0 agrees with a tiny positive argument
  const double z = ev.eval_auto(0.0, 1.0, 1e-12).to_double();
  CHECK(rel(z, ev.eval_auto(1e-6, 1.0, 1e-12).to_double()) < 1e-10);
}
