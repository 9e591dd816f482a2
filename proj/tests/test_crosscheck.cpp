#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "hypheat/crosscheck.hpp"

using namespace hypheat;
using namespace hypheat::crosscheck;
using kernels::KernelQuery;
using kernels::Rep;
using kernels::Space;

namespace {

const PrecisionPolicy P = PrecisionPolicy::automatic();

KernelQuery real_q(int n, Rep rep) {
  KernelQuery q;
  q.space = Space::real_hyperbolic;
  q.rep = rep;
  q.n = n;
  q.prec = P;
  return q;
}

}  // namespace

TEST_CASE("Beta-function identities") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}, std::pair{1.5, 2.5}}) {
    const auto r = residual(Identity::BETA_PRIME, {{"a", a}, {"b", b}}, P);
    CHECK(r.error.empty());
    CHECK(r.rel_residual <= 1e-12);
    CHECK(r.pass);
  }
  for (double a : {0.5, 1.5, 2.5}) {
    const auto r = residual(Identity::QUAD_TRANSFORM, {{"a", a}}, P);
    CHECK(r.rel_residual <= 1e-12);
  }
  // B(1, 1) = 1 exactly.
  CHECK(residual(Identity::BETA_PRIME, {{"a", 1.0}, {"b", 1.0}}, P).lhs.to_double() == 1.0);
}

TEST_CASE("oscillatory and Hartman-Watson identities at t = 1") {
  for (double theta : {0.0, 0.7}) {
    const auto r1 = residual(Identity::INT1, {{"t", 1.0}, {"theta", theta}}, P);
    CHECK(r1.rel_residual <= 1e-10);
    const auto r2 = residual(Identity::INT2, {{"t", 1.0}, {"theta", theta}}, P);
    CHECK(r2.rel_residual <= 1e-10);
  }
  CHECK(residual(Identity::INT3, {{"t", 1.0}, {"theta", 0.7}}, P).rel_residual <= 1e-10);
}

TEST_CASE("residual errors are reported, not thrown") {
  const auto missing = residual(Identity::INT1, {{"t", 1.0}}, P);
  CHECK_FALSE(missing.pass);
  CHECK(missing.error.find("theta") != std::string::npos);
  const auto zero = residual(Identity::INT3, {{"t", 1.0}, {"theta", 0.0}}, P);
  CHECK_FALSE(zero.pass);
  CHECK_FALSE(zero.error.empty());
  CHECK(parse_identity("HW_LAPLACE") == Identity::HW_LAPLACE);
  CHECK_FALSE(parse_identity("INT4").has_value());
}

TEST_CASE("equality and ratio comparisons") {
  const auto grid = radial_grid({0.5, 1.0}, {0.3, 1.0});
  const auto eq = compare(real_q(3, Rep::gruet), real_q(3, Rep::millson), grid, CompareMode::equality, 1e-8);
  CHECK(eq.pass);
  CHECK(eq.worst_rel_dev <= 1e-10);
  CHECK(eq.values_a.size() == grid.size());

  // Damek-Ricci (0, 2) is H^3 at (t/4, r/2) up to a constant.
  KernelQuery dr;
  dr.space = Space::damek_ricci;
  dr.rep = Rep::parity;
  dr.k = 0;
  dr.m = 2;
  dr.prec = P;
  const auto ratio = compare(dr, real_q(3, Rep::millson), grid, CompareMode::ratio, 1e-10, 2, Scaling{0.25, 0.5});
  CHECK(ratio.pass);
  CHECK(ratio.constant_estimate > 0.0);
  const auto not_equal = compare(dr, real_q(3, Rep::millson), grid, CompareMode::equality, 1e-6, 1, {0.25, 0.5});
  CHECK_FALSE(not_equal.pass);

  const auto one = compare(dr, dr, radial_grid({1.0}, {1.0}), CompareMode::ratio, 1e-6);
  CHECK_FALSE(one.pass);
  CHECK_FALSE(one.error.empty());
}

TEST_CASE("comparison reports evaluation failures") {
  KernelQuery g = real_q(3, Rep::gruet);
  const auto rep = compare(g, real_q(3, Rep::millson), radial_grid({0.01}, {1.0}), CompareMode::equality, 1e-6);
  CHECK_FALSE(rep.pass);
  CHECK(rep.error.find("t_min") != std::string::npos);
}

TEST_CASE("mass of the real hyperbolic kernels") {
  for (int n : {2, 3}) {
    KernelQuery q = real_q(n, Rep::millson);
    q.t = 1.0;
    CHECK(std::fabs(mass(q).to_double() - 1.0) <= 1e-8);
  }
}

TEST_CASE("odd-k Damek-Ricci closed form near the origin") {
  const double a = kernels::damek_ricci_parity(3, 4, 1.0, 0.0, P).to_double();
  const double b = kernels::damek_ricci_parity(3, 4, 1.0, 1e-3, P).to_double();
  const double c = kernels::damek_ricci_hw(3, 4, 1.0, 0.0, P).to_double();
  CHECK(std::fabs(a - c) / c <= 1e-6);
  CHECK(b < a);
  CHECK(std::fabs(b - a) / a <= 1e-5);
}

TEST_CASE("JSON serialization") {
  CHECK(decimal(0.1) == "0.1");
  CHECK(decimal(1e-300) == "1e-300");
  CHECK(decimal(INFINITY) == "inf");
  const auto r = residual(Identity::BETA_PRIME, {{"a", 2.0}, {"b", 3.0}}, P);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["identity"] == "BETA_PRIME");
  CHECK(j["pass"] == true);
  CHECK(j["inputs"][0] == "a=2");
  CHECK(j["lhs"].is_string());
  CHECK(std::stod(j["lhs"].get<std::string>()) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(std::stod(j["rel_residual"].get<std::string>()) == r.rel_residual);
}

TEST_CASE("fast acceptance criteria") {
  SuiteOptions o;
  for (int id : {8, 9}) {
    const auto c = run_criterion(id, o);
    INFO(c.summary);
    CHECK(c.pass);
    CHECK_FALSE(c.notes.empty());
  }
  CHECK_THROWS_AS(run_criterion(10, o), DomainError);
}
