#include "doctest.h"

#include <cmath>

#include "sbc/blockmap.hpp"
#include "sbc/special.hpp"
#include "sbc/transition.hpp"

using namespace sbc;

TEST_CASE("Hbar8 quadrature against the hypergeometric closed form") {
  double worst = 0;
  for (int k = -200; k <= 200; ++k) {
    const double u = 0.1 * k;
    if (k == 0) continue;
    worst = std::max(worst, std::fabs(hbar8(u) / hbar8_closed(u) - 1));
  }
  CHECK(worst < 1e-10);
  CHECK(hbar8(0) == doctest::Approx(0).epsilon(1e-15));
}

TEST_CASE("Hbar8 is odd and has the 5/3 growth with the Gamma constant") {
  CHECK(hbar8(-2.5) == doctest::Approx(-hbar8(2.5)).epsilon(1e-13));
  // slow approach to the constant: compare two far points
  auto gap = [](double u) { return std::fabs(hbar8(u) + 216.0 / 95 * std::pow(u, 5.0 / 3) - hbar8_aplus()); };
  CHECK(gap(1e5) < gap(1e3));
  CHECK(gap(1e5) < 0.02 * hbar8_aplus());
  CHECK(2 * hbar8_aplus() == doctest::Approx(btilde_factor()));
}

TEST_CASE("2F1 special value against the series") {
  for (double z : {-0.9, -0.5, -0.1, -0.01})
    CHECK(hyp2f1_special(z) == doctest::Approx(hyp2f1_series(1.0 / 2, 2.0 / 3, 3.0 / 2, z)).epsilon(1e-12));
}

TEST_CASE("H8(nu)/nu^{8/3} extrapolates to the Gamma expression") {
  const auto ex = extrapolate_h8({0.1, 0.05, 0.025});
  CHECK(ex.monotone);
  CHECK(ex.rel_error() < 0.01);
  CHECK(ex.reference == doctest::Approx(252.0).epsilon(1e-4));
  CHECK_THROWS_AS(h8_of_nu(0), DomainError);
}

TEST_CASE("Dulac maps") {
  TruncationInfo info;
  const auto in = dulac_map({1, 3, 0.1, DulacDirection::Incoming}, {0.008, 1, 0, 0, 0}, &info);
  CHECK(in.hyp == doctest::Approx(std::cbrt(0.08)));
  CHECK(info.order == "O(v^3 ln v)");
  const auto out = dulac_map({3, 1, 0.1, DulacDirection::Outgoing}, {0.5, 1, 0, 0, 0});
  CHECK(out.hyp == doctest::Approx(0.0125));
  CHECK_THROWS_AS(dulac_map({}, {0, 1, 0, 0, 0}), DomainError);
}

TEST_CASE("smooth transition conserves the weighted h combination") {
  const auto c = derive_constants({1, 2, 3, 4});
  const SectionCoords s{0.3, 1, 0.05, -0.02, 0};
  const auto r = smooth_transition(0.05, c, s);
  const double comb = c.A2() * (r.h1 - s.h1) + c.A1() * (r.h2 - s.h2);
  CHECK(std::fabs(comb) < 1e-18);
  CHECK(r.h1 > s.h1);
}

TEST_CASE("free power-law fit on an exact law") {
  std::vector<double> v, y;
  for (double x : log_offsets(1e-3, 3e-2, 12)) {
    v.push_back(x);
    y.push_back(3.7 * std::pow(x, 8.0 / 3));
  }
  const auto f = fit_power_law(v, y);
  CHECK(std::fabs(f.exponent - 8.0 / 3) < 1e-10);
  CHECK(f.coefficient == doctest::Approx(3.7).epsilon(1e-9));
  CHECK(f.r_squared == doctest::Approx(1));
}

TEST_CASE("grid fit selects 8/3 for a quasi-regular series") {
  std::vector<double> v;
  std::vector<std::vector<double>> d;
  for (double x : log_offsets(1e-3, 3e-2, 20)) {
    v.push_back(x);
    const double a = 11.8 * std::pow(x, 8.0 / 3) - 40 * std::pow(x, 11.0 / 3);
    d.push_back({a, -a});
  }
  const auto t = quasi_regular_fit(v, d, {"dh1", "dh2"});
  const auto& b = t.candidates[t.best];
  CHECK(b.exp_num == 8);
  CHECK(b.exp_den == 3);
  CHECK(t.ratio_to_neighbours > 1e3);
  CHECK(t.terms[0].coefficient[0] == doctest::Approx(11.8).epsilon(1e-8));
  CHECK(t.terms[0].coefficient[1] == doctest::Approx(-11.8).epsilon(1e-8));
}

TEST_CASE("grid fit with the v^3 ln v remainder term") {
  std::vector<double> v;
  std::vector<std::vector<double>> d;
  for (double x : log_offsets(1e-3, 3e-2, 20)) {
    v.push_back(x);
    d.push_back({2 * std::pow(x, 8.0 / 3) + 5 * x * x * x * std::log(x)});
  }
  QuasiRegularOptions o;
  o.regular_corrections = 0;
  o.log_term = true;
  const auto t = quasi_regular_fit(v, d, {"dh1"}, o);
  CHECK(t.candidates[t.best].exp_num == 8);
  REQUIRE(t.terms.size() == 2);
  CHECK(t.terms[1].log_power == 1);
  CHECK(t.terms[1].coefficient[0] == doctest::Approx(5).epsilon(1e-6));
}

TEST_CASE("grid fit preconditions") {
  std::vector<double> v = log_offsets(1e-3, 1e-2, 10);
  std::vector<std::vector<double>> d;
  for (double x : v) d.push_back({x});
  CHECK_THROWS_AS(quasi_regular_fit(v, d, {"a"}), DomainError);
  v.resize(5);
  d.resize(5);
  CHECK_THROWS_AS(quasi_regular_fit(v, d, {"a"}), PreconditionError);
}

TEST_CASE("serialisation of a series") {
  std::vector<double> v;
  std::vector<std::vector<double>> d;
  for (double x : log_offsets(1e-3, 3e-2, 10)) {
    v.push_back(x);
    d.push_back({std::pow(x, 8.0 / 3) - 3 * std::pow(x, 11.0 / 3)});
  }
  const auto j = to_json(quasi_regular_fit(v, d, {"dh1"}));
  CHECK(j.at("best_exponent") == "8/3");
}
