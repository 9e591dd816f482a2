#include "doctest.h"
#include "hypheat/scalar.hpp"

using namespace hypheat;

TEST_CASE("arithmetic keeps the wider precision") {
  BigReal a(1.0, 200);
  BigReal b(3.0, 64);
  BigReal c = a / b;
  CHECK(c.precision() == 200);
  CHECK(std::fabs(c.to_double() - 1.0 / 3.0) < 1e-16);
}

TEST_CASE("round trip through double is lossless") {
  const double x = 0.1234567890123456789;
  CHECK(BigReal(x, 128).to_double() == x);
}

TEST_CASE("elementary functions at high precision") {
  const int bits = 256;
  BigReal pi = const_pi(bits);
  CHECK(abs(sin(pi)) < BigReal("1e-70", bits));
  CHECK(abs(exp(log(BigReal(7.0, bits))) - 7.0) < BigReal("1e-70", bits));
  CHECK(abs(cosh(BigReal(1.0, bits)) * cosh(BigReal(1.0, bits)) - sinh(BigReal(1.0, bits)) * sinh(BigReal(1.0, bits)) - 1.0) <
        BigReal("1e-70", bits));
}

TEST_CASE("decimal parsing and rendering") {
  BigReal x("2.5", 128);
  CHECK(x.to_double() == 2.5);
  CHECK(x.to_string(5) == "2.5");
  CHECK_THROWS_AS(BigReal("abc", 64), std::invalid_argument);
}

TEST_CASE("move leaves a usable object") {
  BigReal a(3.0, 100);
  BigReal b(std::move(a));
  CHECK(b.to_double() == 3.0);
  a = BigReal(2.0, 100);
  CHECK(a.to_double() == 2.0);
}

TEST_CASE("precision policy digits") {
  auto p = PrecisionPolicy::automatic(1e-12);
  CHECK(p.target_digits() == 12);
  CHECK(p.oscillatory_digits(1.0) == 16 + 3 + 12);
  CHECK(p.oscillatory_digits(0.1) == 16 + 22 + 12);
  CHECK(PrecisionPolicy::fixed(80).oscillatory_bits(0.1) == 80);
}
