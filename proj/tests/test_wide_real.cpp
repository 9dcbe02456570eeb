#include "doctest.h"

#include <cmath>

#include "dyadsq/wide_real.hpp"

using dyadsq::WideReal;

TEST_CASE("round trip through double") {
  for (double v : {1.0, -3.5, 1e-300, 7.25e200, 0.0}) {
    CHECK(WideReal(v).to_double() == v);
  }
}

TEST_CASE("arithmetic agrees with double where representable") {
  const double a = 3.7e10, b = -1.25e-7;
  CHECK((WideReal(a) * WideReal(b)).to_double() == doctest::Approx(a * b).epsilon(1e-15));
  CHECK((WideReal(a) / WideReal(b)).to_double() == doctest::Approx(a / b).epsilon(1e-15));
  CHECK((WideReal(a) + WideReal(1.0)).to_double() == doctest::Approx(a + 1.0).epsilon(1e-15));
  CHECK((WideReal(2.0) - WideReal(2.0)).is_zero());
}

TEST_CASE("exponents far outside the double range") {
  const WideReal big = WideReal::exp2(40000.25);
  const WideReal tiny = WideReal::exp2(-40000.0);
  CHECK((big * tiny).to_double() == doctest::Approx(std::exp2(0.25)).epsilon(1e-12));
  CHECK(big.log2_abs() == doctest::Approx(40000.25).epsilon(1e-14));
  CHECK(std::isinf(big.to_double()));
  CHECK(tiny.to_double() == 0.0);
  CHECK(sqrt(WideReal::exp2(-40001.0)).log2_abs() == doctest::Approx(-20000.5));
  CHECK(pow(WideReal::exp2(30000.0), 0.25).log2_abs() == doctest::Approx(7500.0).epsilon(1e-15));
  CHECK(WideReal::exp2(-5.0) < WideReal::exp2(-4.0));
  CHECK(-big < tiny);
  CHECK(ldexp(WideReal(3.0), -2).to_double() == 0.75);
}
