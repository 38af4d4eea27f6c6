#include "doctest.h"

#include <cmath>

#include "sbc/blockmap.hpp"

using namespace sbc;

namespace {
const DerivedConstants& equal() {
  static const auto c = derive_constants({});
  return c;
}
}  // namespace

TEST_CASE("entry state sits on the section at the requested kappa level") {
  BlockMapOptions o;
  const auto g = entry_state(5e-3, equal(), o);
  CHECK((g[0] + g[1]) / 2 == doctest::Approx(-o.delta).epsilon(1e-15));
  CHECK(g[3] == o.h1_star);
  const auto r = numeric_block_map(5e-3, equal(), o);
  CHECK(r.v == doctest::Approx(5e-3).epsilon(1e-10));
  CHECK((r.exit[0] + r.exit[1]) / 2 == doctest::Approx(o.delta).epsilon(1e-12));
}

TEST_CASE("uncoupled passage conserves h and y") {
  BlockMapOptions o;
  o.uncoupled = true;
  for (double s : {2e-3, 2e-2}) {
    const auto r = numeric_block_map(s, equal(), o);
    CHECK(r.conserved_drift < 10 * o.cfg.abs_tol);
  }
}

TEST_CASE("coupled passage: opposite energy exchange, energy conserved") {
  BlockMapOptions o;
  for (double s : {1e-3, 1e-2, 3e-2}) {
    const auto r = numeric_block_map(s, equal(), o);
    CAPTURE(s);
    CHECK(r.dh1 > 0);
    CHECK(r.dh2 < 0);
    CHECK(std::fabs(r.dh1 / r.dh2 + 1) < 0.02);
    CHECK(r.energy_drift < 10 * o.cfg.abs_tol);
    CHECK(r.time_physical > 0);
  }
}

TEST_CASE("halving the offset scales dh1 by 2^{-8/3}") {
  BlockMapOptions o;
  for (double s : {0.03, 0.01, 0.004}) {
    const double q = numeric_block_map(s / 2, equal(), o).dh1 / numeric_block_map(s, equal(), o).dh1;
    CAPTURE(s);
    CHECK(std::fabs(q / std::pow(2.0, -8.0 / 3) - 1) < 0.05);
  }
}

TEST_CASE("negative offsets pass on the other side: the exchange flips sign") {
  BlockMapOptions o;
  const auto p = numeric_block_map(4e-3, equal(), o), m = numeric_block_map(-4e-3, equal(), o);
  CHECK(p.entry[0] - p.entry[1] > 0);
  CHECK(m.entry[0] - m.entry[1] < 0);
  CHECK(m.dh1 < 0);
  CHECK(std::fabs(p.dh1 + m.dh1) < 2e-2 * std::fabs(p.dh1));
}

TEST_CASE("preconditions and the collision-orbit guard") {
  BlockMapOptions o;
  CHECK_THROWS_AS(numeric_block_map(0, equal(), o), PreconditionError);
  BlockMapOptions bad = o;
  bad.delta = 1.5;
  CHECK_THROWS_AS(numeric_block_map(1e-2, equal(), bad), PreconditionError);
  bad = o;
  bad.h1_star = 0.3;
  CHECK_THROWS_AS(numeric_block_map(1e-2, equal(), bad), PreconditionError);
  const double smin = min_offset(equal(), o);
  try {
    numeric_block_map(smin / 2, equal(), o);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.error_class() == "collision_orbit");
  }
}

TEST_CASE("property: serial sweeps are bit-identical, parallel merges in order") {
  BlockMapOptions o;
  const auto s = log_offsets(1e-3, 3e-2, 8);
  const auto a = sweep_and_fit(s, equal(), o, 1), b = sweep_and_fit(s, equal(), o, 1), c = sweep_and_fit(s, equal(), o, 3);
  CHECK(sweep_csv(a) == sweep_csv(b));
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(sweep_csv(a) == sweep_csv(c));
  CHECK(sweep_csv(a).rfind("s,v,dh1,dh2,dx,dy,time_rescaled,time_physical\n", 0) == 0);
}

TEST_CASE("property: the coefficient does not depend on the section placement") {
  // delta = 0.1 needs base values inside its ball
  BlockMapOptions a, b;
  b.delta = 0.1;
  b.h1_star = 0.05;
  b.h2_star = -0.05;
  a.h1_star = 0.05;
  a.h2_star = -0.05;
  const auto s = log_offsets(1e-3, 9e-3, 10);
  std::vector<double> ca, cb;
  for (double x : s) {
    ca.push_back(numeric_block_map(x, equal(), a).dh1 / std::pow(x, 8.0 / 3));
    cb.push_back(numeric_block_map(x, equal(), b).dh1 / std::pow(x, 8.0 / 3));
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    CAPTURE(s[i]);
    CHECK(std::fabs(ca[i] / cb[i] - 1) < 0.02);
  }
}

TEST_CASE("failed rows are reported, not dropped silently") {
  BlockMapOptions o;
  std::vector<double> s = log_offsets(1e-3, 3e-2, 8);
  s.push_back(1e-9);
  const auto r = sweep_and_fit(s, equal(), o, 1);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].error_class == "collision_orbit");
  CHECK(r.rows.size() == 8);
  CHECK(r.fitted);
}

TEST_CASE("uncoupled sweep refuses to fit") {
  BlockMapOptions o;
  o.uncoupled = true;
  const auto r = sweep_and_fit(log_offsets(1e-3, 3e-2, 8), equal(), o, 1);
  CHECK_FALSE(r.fitted);
  CHECK(r.fit_note.find("no fit") != std::string::npos);
}

TEST_CASE("passage trajectory ends on the exit section") {
  BlockMapOptions o;
  const auto nodes = passage_trajectory(1e-2, equal(), o);
  REQUIRE(nodes.size() > 2);
  const auto& last = nodes.back().state;
  CHECK((last[0] + last[1]) / 2 == doctest::Approx(o.delta).epsilon(1e-6));
  for (std::size_t i = 1; i < nodes.size(); ++i) CHECK(nodes[i].tau > nodes[i - 1].tau);
}

TEST_CASE("extended precision reaches below v = 1e-4") {
  BlockMapOptions o;
  o.extended = true;
  o.cfg.abs_tol = o.cfg.rel_tol = 1e-16;
  CHECK_THROWS(numeric_block_map(5e-5, equal(), BlockMapOptions{}));  // plain double refuses
  const auto r = numeric_block_map(5e-5, equal(), o);
  const double coef = r.dh1 / std::pow(r.v, 8.0 / 3) / (equal().btilde_c * equal().A1());
  CAPTURE(coef);
  CHECK(std::fabs(coef - 1) < 0.05);
  CHECK(r.energy_drift < 10 * o.cfg.abs_tol);
}

TEST_CASE("extended precision at the default tolerance lands on the exit section") {
  // regression: a double-rounded first step used to leave a sub-min_step sliver
  BlockMapOptions o;
  o.extended = true;
  const auto r = numeric_block_map(1e-2, equal(), o);
  const auto d = numeric_block_map(1e-2, equal(), BlockMapOptions{});
  CHECK(r.dh1 == doctest::Approx(d.dh1).epsilon(1e-6));
}
