#include "doctest.h"

#include <cmath>

#include "sbc/fields.hpp"
#include "sbc/integrator.hpp"

using namespace sbc;

namespace {

using V2 = VecN<double, 2>;

// One binary in Levi-Civita form: z'' = h z (h < 0 bound), exact solution sin.
const FieldFn<double, 2> kepler_lc = [](double, const V2& y) { return V2{y[1], -0.5 * y[0]}; };

// The same binary on the uncoupled energy level h = 1 and unit clock:
// z' = sqrt(1 + z^2), exact solution sinh.
const FieldFn<double, 2> kepler_branch = [](double, const V2& y) { return V2{std::sqrt(1 + y[0] * y[0]), 0}; };

double fixed_step_error(int order, int n) {
  IntegratorConfig cfg;
  cfg.method_order = order;
  detail::Stepper<double, 2> st(kepler_branch, cfg);
  const double T = 6, h = T / n;
  V2 y{0, 0}, ynew, fnew;
  double t = 0;
  V2 f0 = kepler_branch(t, y);
  for (int k = 0; k < n; ++k) {
    st.attempt(t, y, f0, h, ynew, fnew);
    y = ynew;
    f0 = fnew;
    t += h;
  }
  return std::fabs(y[0] / std::sinh(T) - 1);
}

}  // namespace

TEST_CASE("property: observed order matches the method order") {
  for (int order : {8, 5}) {
    const int n = order == 8 ? 8 : 32;
    const double e1 = fixed_step_error(order, n), e2 = fixed_step_error(order, 2 * n), e3 = fixed_step_error(order, 4 * n);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    CAPTURE(order);
    CAPTURE(p1);
    CAPTURE(p2);
    CHECK(std::fabs(p2 - order) < 0.3);
  }
}

TEST_CASE("zero field gives a constant trajectory") {
  const FieldFn<double, 2> zero = [](double, const V2&) { return V2{0, 0}; };
  const auto tr = integrate<double, 2>(zero, 0, {1.5, -2}, 10, {});
  CHECK(tr.y.back()[0] == 1.5);
  CHECK(tr.y.back()[1] == -2);
  CHECK(tr.eval(3.3)[0] == 1.5);
}

TEST_CASE("dense output matches the solution between nodes") {
  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-12;
  const double w = std::sqrt(0.5);
  const auto tr = integrate<double, 2>(kepler_lc, 0, {0, w}, 6, cfg);
  for (double t : {0.37, 1.91, 3.3, 5.55}) CHECK(tr.eval(t)[0] == doctest::Approx(std::sin(w * t)).epsilon(1e-10));
}

TEST_CASE("linear field, hyperplane section: hit time in closed form") {
  const FieldFn<double, 2> lin = [](double, const V2&) { return V2{1, 2}; };
  SectionSpec<double, 2> sec;
  sec.level = [](const V2& y) { return y[0] + y[1] - 1; };
  sec.direction = CrossDirection::Increasing;
  const auto r = integrate_to_section<double, 2>(lin, 0, {0, 0}, sec, 100, {});
  CHECK(std::fabs(r.hit.t - 1.0 / 3) < 1e-12);
  CHECK(std::fabs(r.hit.residual) < 1e-12);
}

TEST_CASE("direction filter skips the wrong-way crossing") {
  // y0 = sin t crosses 0.5 upward at pi/6 and downward at 5 pi/6
  const FieldFn<double, 2> osc = [](double, const V2& y) { return V2{y[1], -y[0]}; };
  SectionSpec<double, 2> sec;
  sec.level = [](const V2& y) { return y[0] - 0.5; };
  sec.direction = CrossDirection::Decreasing;
  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-13;
  const auto r = integrate_to_section<double, 2>(osc, 0, {0, 1}, sec, 10, cfg);
  CHECK(r.hit.t == doctest::Approx(5 * M_PI / 6).epsilon(1e-11));
  CHECK(r.hit.rate < 0);
}

TEST_CASE("no crossing is an error") {
  const FieldFn<double, 2> lin = [](double, const V2&) { return V2{1, 0}; };
  SectionSpec<double, 2> sec;
  sec.level = [](const V2& y) { return y[1] - 1; };
  CHECK_THROWS_AS((integrate_to_section<double, 2>(lin, 0, {0, 0}, sec, 5, {})), IntegrationError);
}

TEST_CASE("max_steps and invalid configs are refused") {
  IntegratorConfig cfg;
  cfg.max_steps = 3;
  CHECK_THROWS_AS((integrate<double, 2>(kepler_lc, 0, {0, 1}, 1000, cfg)), IntegrationError);
  IntegratorConfig bad;
  bad.abs_tol = -1;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = {};
  bad.method_order = 4;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("heteroclinic on the collision manifold") {
  // r = 0 stays invariant and theta runs from near -3pi/4 to near pi/4
  const auto c = derive_constants({});
  using V6 = VecN<double, 6>;
  const FieldFn<double, 6> f = [&c](double, const V6& y) { return vf_polar<double>(y, c); };
  SectionSpec<double, 6> sec;
  sec.level = [](const V6& y) { return y[1] - (M_PI / 4 - 0.1); };
  sec.direction = CrossDirection::Increasing;
  IntegratorConfig cfg;
  cfg.max_step = 0.5;
  const auto r = integrate_to_section<double, 6>(f, 0, {0, -3 * M_PI / 4 + 0.1, 1, 0.1, -0.1, 0}, sec, 1e4, cfg);
  CHECK(r.hit.y[0] == 0);
  CHECK(r.hit.y[1] == doctest::Approx(M_PI / 4 - 0.1));
}

TEST_CASE("uncoupled field conserves h and y; GLC conserves energy") {
  const auto c = derive_constants({1, 2, 3, 4});
  using V6 = VecN<double, 6>;
  IntegratorConfig cfg;
  const double tol = cfg.abs_tol;
  const V6 y0{0.2, 0.15, 1, 0.2, -0.1, 0.05};
  const FieldFn<double, 6> fu = [&c](double, const V6& y) { return vf_uncoupled<double>(y, c); };
  const auto tu = integrate<double, 6>(fu, 0, y0, 3, cfg);
  for (int i : {3, 4, 5}) CHECK(std::fabs(tu.y.back()[i] - y0[i]) < 10 * tol);
  const FieldFn<double, 6> fg = [&c](double, const V6& y) { return vf_glc<double>(y, c); };
  const auto tg = integrate<double, 6>(fg, 0, y0, 3, cfg);
  CHECK(std::fabs(energy_glc(tg.y.back(), c) - energy_glc(y0, c)) < 10 * tol);
}

TEST_CASE("property: halving the tolerance reduces the energy drift") {
  // single pairs fluctuate with the step sequence (1.4 to 2.5 seen), so the
  // factor is taken as the geometric mean over a ladder of tolerances
  const auto c = derive_constants({});
  using V6 = VecN<double, 6>;
  const V6 y0{0.2, 0.15, 1, 0.2, -0.1, 0.05};
  const FieldFn<double, 6> fg = [&c](double, const V6& y) { return vf_glc<double>(y, c); };
  auto drift = [&](double tol) {
    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = tol;
    const auto tr = integrate<double, 6>(fg, 0, y0, 3, cfg);
    return std::fabs(energy_glc(tr.y.back(), c) - energy_glc(y0, c));
  };
  double logsum = 0;
  int n = 0;
  for (double tol : {1e-7, 1e-8, 1e-9, 1e-10}) {
    const double q = drift(tol) / drift(tol / 2);
    CAPTURE(tol);
    CHECK(q > 1);
    logsum += std::log(q);
    ++n;
  }
  CHECK(std::exp(logsum / n) >= 1.5);
}

TEST_CASE("long double scalar path") {
  using V2L = VecN<long double, 2>;
  const FieldFn<long double, 2> f = [](long double, const V2L& y) { return V2L{y[1], -y[0]}; };
  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-17;
  const auto tr = integrate<long double, 2>(f, 0, {0, 1}, 1, cfg);
  CHECK(std::fabs(double(tr.y.back()[0] - std::sin(1.0L))) < 1e-15);
}
