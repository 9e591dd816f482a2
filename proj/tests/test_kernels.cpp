#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypheat/kernels.hpp"

using namespace hypheat;
using namespace hypheat::kernels;

namespace {

constexpr double kPi = std::numbers::pi;
const PrecisionPolicy P = PrecisionPolicy::automatic();

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("hyperbolic distance in the upper half-plane") {
  CHECK(hyperbolic_distance_h2(0.0, 1.0) == 0.0);
  CHECK(hyperbolic_distance_h2(0.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hyperbolic_distance_h2(0.7, 1.3) == hyperbolic_distance_h2(-0.7, 1.3));
}

TEST_CASE("odd dimensions: closed forms") {
  CHECK(rel(real_hyperbolic_odd(0, 1.0, 1.0, P).to_double(), std::exp(-0.5) / std::sqrt(2.0 * kPi)) <= 1e-15);
  const double n3 = std::exp(-1.0) / (2.0 * kPi * std::sqrt(2.0 * kPi) * std::sinh(1.0));
  CHECK(rel(real_hyperbolic_odd(1, 1.0, 1.0, P).to_double(), n3) <= 1e-14);
  // r = 0 through the limit path: r / sinh r -> 1.
  const double d3 = std::exp(-0.5) / (2.0 * kPi * std::sqrt(2.0 * kPi));
  CHECK(rel(real_hyperbolic_odd(1, 1.0, 0.0, P).to_double(), d3) <= 1e-10);
  CHECK(real_hyperbolic_odd(3, 1.0, 0.0, P).to_double() > 0.0);
}

TEST_CASE("Gruet formula against the closed forms") {
  const double n3 = std::exp(-1.0) / (2.0 * kPi * std::sqrt(2.0 * kPi) * std::sinh(1.0));
  CHECK(rel(gruet(3, 1.0, 1.0, P).to_double(), n3) <= 1e-10);
  CHECK(rel(gruet(5, 1.0, 1.0, P).to_double(), real_hyperbolic_odd(2, 1.0, 1.0, P).to_double()) <= 1e-8);
  CHECK(rel(gruet(2, 1.0, 1.0, P).to_double(), real_hyperbolic_even(0, 1.0, 1.0, P).to_double()) <= 1e-6);
  CHECK(rel(gruet(4, 2.0, 0.5, P).to_double(), real_hyperbolic_even(1, 2.0, 0.5, P).to_double()) <= 1e-6);
  CHECK(gruet(2.5, 1.0, 0.0, P).to_double() > 0.0);
}

TEST_CASE("even dimensions: substitution agrees with the raw integral") {
  for (double t : {0.5, 1.0, 3.0}) {
    for (double r : {0.2, 1.0, 2.5}) {
      CHECK(rel(real_hyperbolic_even_direct(t, r, P).to_double(), real_hyperbolic_even(0, t, r, P).to_double()) <=
            1e-8);
    }
  }
}

TEST_CASE("monotone decay in r") {
  for (int m : {0, 1, 2}) {
    double prev = INFINITY;
    for (double r : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const double v = real_hyperbolic_even(m, 1.0, r, P).to_double();
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("Jacobi spectral formula") {
  // r = 0: phi_p(0) = 1 and the value is positive.
  CHECK(jacobi_spectral(0.75, 1.0, 0.0, P).to_double() > 0.0);
  // nu = 1/2 is H^3: with gamma = 1/8 the ratio to the closed form is t-independent.
  std::vector<double> ratios;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double r : {0.3, 1.0}) {
      ratios.push_back(jacobi_spectral(0.5, t, r, P).to_double() / real_hyperbolic_odd(1, t, r, P).to_double());
    }
  }
  for (double q : ratios) CHECK(rel(q, ratios.front()) <= 1e-8);
  const double a = jacobi_spectral(0.5, 0.5, 1.0, P, 0.5).to_double() / real_hyperbolic_odd(1, 0.5, 1.0, P).to_double();
  const double b = jacobi_spectral(0.5, 2.0, 1.0, P, 0.5).to_double() / real_hyperbolic_odd(1, 2.0, 1.0, P).to_double();
  CHECK(rel(a, b) > 1e-2);
}

TEST_CASE("Damek-Ricci parity formulas") {
  // k = 0, m = 2 is H^3 with t -> t/4, r -> r/2.
  std::vector<double> ratios;
  for (double t : {0.5, 2.0}) {
    for (double r : {0.4, 2.0}) {
      ratios.push_back(damek_ricci_parity(0, 2, t, r, P).to_double() /
                       real_hyperbolic_odd(1, t / 4.0, r / 2.0, P).to_double());
    }
  }
  for (double q : ratios) CHECK(rel(q, ratios.front()) <= 1e-12);
  CHECK_THROWS_AS(damek_ricci_parity(1, 3, 1.0, 1.0, P), DomainError);
  CHECK_THROWS_AS(damek_ricci_parity(0, 0, 1.0, 1.0, P), DomainError);
}

TEST_CASE("Damek-Ricci representations agree") {
  for (auto [k, m] : {std::pair{2, 2}, std::pair{1, 2}, std::pair{3, 4}}) {
    const double a = damek_ricci_parity(k, m, 1.0, 1.0, P).to_double();
    CHECK(rel(damek_ricci_hw(k, m, 1.0, 1.0, P).to_double(), a) <= 1e-6);
    CHECK(rel(damek_ricci_single(k, m, 1.0, 1.0, P).to_double(), a) <= 1e-6);
  }
  // k = 0: nu = -1/2 collapses the hypergeometric factor.
  CHECK(rel(damek_ricci_single(0, 2, 2.0, 0.5, P).to_double(), damek_ricci_hw(0, 2, 2.0, 0.5, P).to_double()) <=
        1e-8);
}

TEST_CASE("complex hyperbolic scalings") {
  std::vector<double> q1, q2;
  for (double t : {1.0, 2.0}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const double v = complex_hyperbolic_matsumoto(1, t, r, P).to_double();
      CHECK(v > 0.0);
      q1.push_back(v / real_hyperbolic_even(0, 4.0 * t, 2.0 * r, P).to_double());
      q2.push_back(complex_hyperbolic_matsumoto(2, t, r, P).to_double() /
                   damek_ricci_parity(1, 2, 4.0 * t, 2.0 * r, P).to_double());
    }
  }
  for (double q : q1) CHECK(rel(q, q1.front()) <= 1e-8);
  for (double q : q2) CHECK(rel(q, q2.front()) <= 1e-8);
}

TEST_CASE("Maass kernel") {
  for (auto [w, y] : {std::pair{0.3, 1.2}, std::pair{-1.0, 0.5}, std::pair{0.0, 1.0}}) {
    const double r = hyperbolic_distance_h2(w, y);
    const KernelValue m0 = maass_theta(0, 1.0, w, y, P);
    CHECK(m0.value.to_double() == real_hyperbolic_even(0, 1.0, r, P).to_double());
    CHECK(m0.phase == std::complex<double>(1.0, 0.0));
    for (int k : {1, 2, 3}) CHECK(std::fabs(std::abs(maass_phase(k, w, y)) - 1.0) <= 1e-14);
  }
  const double a = maass_theta(1, 1.0, 0.3, 1.2, P).to_double();
  const double b = maass_hw(1, 1.0, 0.3, 1.2, P).to_double();
  const double c = maass_theta(1, 2.0, 1.0, 2.0, P).to_double();
  const double d = maass_hw(1, 2.0, 1.0, 2.0, P).to_double();
  CHECK(rel(a / b, c / d) <= 1e-6);
  CHECK(maass_hw(2, 1.0, 0.0, 1.0, P).to_double() > 0.0);
  CHECK(rel(maass_hw(0, 1.0, 0.3, 1.2, P).to_double(), maass_theta(0, 1.0, 0.3, 1.2, P).to_double()) <= 1e-8);
}

TEST_CASE("query dispatch and validation") {
  KernelQuery q;
  q.space = Space::real_hyperbolic;
  q.rep = Rep::gruet;
  q.n = 3;
  q.t = 1.0;
  q.r = 1.0;
  const double n3 = std::exp(-1.0) / (2.0 * kPi * std::sqrt(2.0 * kPi) * std::sinh(1.0));
  CHECK(rel(evaluate(q).to_double(), n3) <= 1e-10);
  q.rep = Rep::spectral;
  CHECK_THROWS_AS(evaluate(q), DomainError);
  q.space = Space::damek_ricci;
  q.rep = Rep::parity;
  q.m = 3;
  CHECK_THROWS_AS(evaluate(q), DomainError);
  CHECK(parse_rep("hw2f0") == Rep::hw_2f0);
  CHECK(parse_space("damek-ricci") == Space::damek_ricci);
  CHECK_FALSE(parse_rep("nope").has_value());
}
