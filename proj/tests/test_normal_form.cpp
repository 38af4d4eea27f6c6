#include "doctest.h"

#include <random>

#include "sbc/normal_form.hpp"
#include "sbc/transition.hpp"
#include "sbc/verify.hpp"

using namespace sbc;

namespace {
Poly z1() { return Poly::var(Z1); }
Poly z2() { return Poly::var(Z2); }
}  // namespace

TEST_CASE("printed polynomials in factored form") {
  // the engine's expanded constants against the factored displays
  const Poly R61 = Rational(8, 7195) * (Rational(-3) * z1() * z2().pow(2) * (Rational(20) * z1().pow(3) - Rational(13) * z2().pow(3)));
  const Poly R62 = Rational(8, 7195) * (Rational(11) * z1().pow(6) + Rational(10) * z1().pow(3) * z2().pow(3) - Rational(10) * z2().pow(6));
  const Poly Rh = Rational(4, 19) * (z1() - z2()) * (z1() * z1() + z1() * z2() + z2() * z2()) *
                  (z1().pow(6) - Rational(11) * z1().pow(3) * z2().pow(3) + z2().pow(6));
  const Poly k7 = Rational(1, 50365) * z1() *
                  (Rational(485) * z1().pow(6) - Rational(665) * z1().pow(3) * z2().pow(3) + Rational(308) * z2().pow(6));
  CHECK(printed_R61() == R61);
  CHECK(printed_R62() == R62);
  CHECK(printed_Rh() == Rh);
  CHECK(printed_kappa7() == k7);
}

TEST_CASE("degree-9 normal form reproduces the resonant terms exactly") {
  const auto r = normal_form_report(derive_constants({}), 9);
  CHECK(r.certified);
  CHECK(r.R61_matches);
  CHECK(r.R62_matches);
  CHECK(r.Rh_matches);
  CHECK(r.Rh == printed_Rh());
  CHECK(r.kappa7_matches);
  CHECK(r.x_y_flat);
  CHECK(r.h_combination_zero);
  CHECK(r.lowest_h_resonance == 9);
  CHECK(r.rh_scale == doctest::Approx(3.0 / 64));
}

TEST_CASE("low degree ceiling has no h-resonance") {
  const auto r = normal_form_report(derive_constants({}), 5);
  CHECK(r.certified);
  CHECK(r.lowest_h_resonance == -1);
  CHECK(to_json(r).at("note").get<std::string>().find("no resonant terms") != std::string::npos);
}

TEST_CASE("the engine's R_h is the printed one and passes every kernel certificate") {
  CHECK(rh_from_engine() == printed_Rh());
  const auto k = kernel_certificate(printed_Rh());
  CHECK(k.adjoint_annihilates);
  CHECK(k.deg9_kernel_dim == 1);
  CHECK(k.residual_nonzero);
  CHECK(k.deg3_kernel_is_kappa_hat);
}

TEST_CASE("a perturbed R_h fails the kernel certificate") {
  Poly bad = printed_Rh();
  bad.add_term({8, 1, 0, 0, 0, 0}, Rational(1, 1000));
  CHECK_FALSE(kernel_certificate(bad).passed());
}

TEST_CASE("property: R_6 is mass independent, the h-resonance scales with b_c a_i^{-1/3}") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.3, 5.0);
  for (int k = 0; k < 5; ++k) {
    const MassParams m{U(rng), U(rng), U(rng), U(rng)};
    const auto c = derive_constants(m);
    const auto r = normal_form_report(c, 9);
    CAPTURE(m.m1);
    CHECK(r.certified);
    CHECK(r.R61_matches);
    CHECK(r.R62_matches);
    CHECK(r.Rh == printed_Rh());
    CHECK(r.rh_scale == doctest::Approx(c.bc * c.A1()).epsilon(1e-10));
    CHECK(r.rh_scale_h2 == doctest::Approx(c.bc * c.A2()).epsilon(1e-10));
    CHECK(r.h_combination_zero);
  }
}

TEST_CASE("X0 adjoint annihilates exactly the z1^3 - z2^3 direction in degree 3") {
  CHECK(x0_derivation(z1().pow(3) - z2().pow(3)).is_zero());
  CHECK_FALSE(x0_derivation(z1().pow(3) + z2().pow(3)).is_zero());
  CHECK(homological_block(false, 8).kernel_dim() == 1);
}

TEST_CASE("kappa is a first integral of the normal form up to the truncation") {
  const auto c = derive_constants({});
  const auto X = taylor_field(nf_params(c, 9));
  const auto nf = normal_form(X, 9);
  const Poly k = kappa_integral(nf.normal_form, 9);
  // N(kappa) has no terms below z-degree 10
  const Poly d = apply_derivation(nf.normal_form, k, 9);
  CHECK(d.truncated(9).is_zero());
}
