#include "doctest.h"

#include <cmath>

#include "sbc/constants.hpp"
#include "sbc/special.hpp"
#include "sbc/transition.hpp"

using namespace sbc;

TEST_CASE("equal masses give b_c = 3/32") {
  const auto c = derive_constants({});
  CHECK(c.bc == 3.0 / 32);
  CHECK(c.a1 == doctest::Approx(8));
  CHECK(c.a2 == doctest::Approx(8));
  CHECK(c.A1() == doctest::Approx(0.5));
  CHECK(c.btilde_c == doctest::Approx(23.62491614550875).epsilon(1e-14));
}

TEST_CASE("unequal masses keep every constant positive") {
  for (MassParams m : {MassParams{1, 2, 3, 4}, MassParams{2, 1, 1, 3}, MassParams{0.1, 5, 7, 0.3}}) {
    const auto c = derive_constants(m);
    CHECK(c.bc > 0);
    CHECK(c.btilde_c > 0);
    CHECK(c.a1 > 0);
    CHECK(c.a2 > 0);
    CHECK(c.mu > 0);
    for (double d : {c.d1, c.d2, c.d3, c.d4}) CHECK(d > 0);
  }
}

TEST_CASE("nonpositive masses are refused") {
  CHECK_THROWS(derive_constants({1, 0, 1, 1}));
  CHECK_THROWS(derive_constants({1, 1, -2, 1}));
}

TEST_CASE("Gamma-expression oracle") {
  // -24 3^{1/6} sqrt(pi) Gamma(-5/6) / Gamma(2/3), checked against mpmath offline
  CHECK(btilde_factor() == doctest::Approx(251.99910555209334).epsilon(1e-13));
  CHECK(gamma_fn(-5.0 / 6) == doctest::Approx(-6.679579202136281).epsilon(1e-13));
  CHECK(gamma_fn(2.0 / 3) == doctest::Approx(1.3541179394264004).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == doctest::Approx(24).epsilon(1e-14));
}

TEST_CASE("predicted block-map coefficients") {
  // btilde_c a1^{-1/3}; frozen from the closed forms
  CHECK(block_map_prediction(derive_constants({})).coeff_h1 == doctest::Approx(11.812458072754374).epsilon(1e-13));
  CHECK(block_map_prediction(derive_constants({1, 2, 3, 4})).coeff_h1 == doctest::Approx(0.48961).epsilon(1e-4));
  CHECK(block_map_prediction(derive_constants({2, 1, 1, 3})).coeff_h1 == doctest::Approx(1.62516).epsilon(1e-4));
  const auto p = block_map_prediction(derive_constants({1, 2, 3, 4}));
  CHECK(p.coeff_h2 < 0);
  CHECK(p.coeff_h2_printed == doctest::Approx(-p.coeff_h2));
}

TEST_CASE("constants serialise") {
  const auto j = to_json(derive_constants({}));
  CHECK(j.at("bc").get<double>() == 3.0 / 32);
  CHECK(j.contains("btilde_c"));
}
