#include "doctest.h"

#include <cmath>
#include <random>

#include "sbc/charts.hpp"
#include "sbc/dirblowup.hpp"
#include "sbc/fields.hpp"
#include "sbc/nf_context.hpp"
#include "sbc/verify.hpp"

using namespace sbc;

TEST_CASE("chart round trips through GLC") {
  const auto c = derive_constants({1, 2, 3, 4});
  const ChartState g{ChartId::GeneralisedLC, {0.3, 0.2, 1.1, 0.05, -0.04, 0.01}, 1};
  for (ChartId id : {ChartId::Physical, ChartId::LeviCivita, ChartId::RotatedGLC, ChartId::PolarBlowup,
                     ChartId::DirZ1, ChartId::DirZ2}) {
    CAPTURE(chart_name(id));
    const auto a = chart_transform(g, id, c);
    const auto b = chart_transform(a, ChartId::GeneralisedLC, c);
    for (int i = 0; i < 6; ++i) CHECK(b.x[i] == doctest::Approx(g.x[i]).epsilon(1e-12));
  }
}

TEST_CASE("branch violations and the NormalForm chart are refused") {
  const auto c = derive_constants({});
  CHECK_THROWS_AS(vf_glc<double>({2, 0.1, 1, -1, 0, 0}, c), DomainError);
  const ChartState g{ChartId::GeneralisedLC, {0.3, 0.2, 1, 0, 0, 0}, 1};
  CHECK_THROWS_AS(chart_transform(g, ChartId::NormalForm, c), DomainError);
  CHECK_THROWS_AS(vf_polar<double>({-0.1, 0, 1, 0, 0, 0}, c), DomainError);
}

TEST_CASE("polar Jacobian on the collision manifold: 1:3 and 3:1 saddles") {
  const auto c = derive_constants({2, 1, 1, 3});
  CheckContext ctx;
  for (const auto& spec : check_registry())
    if (spec.name == "polar-eigenvalues") CHECK(spec.run(ctx).passed);
}

TEST_CASE("collision-manifold flow ignores the centre variables") {
  CheckContext ctx;
  ctx.seed = 3;
  for (const auto& spec : check_registry())
    if (spec.name == "collision-manifold") CHECK(spec.run(ctx).passed);
}

TEST_CASE("energy is a first integral of the GLC field (exact Jacobian test)") {
  // grad E . f = 0 pointwise, via forward differentiation of E along f
  const auto c = derive_constants({1, 2, 3, 4});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  for (int k = 0; k < 10; ++k) {
    const State6<double> s{U(rng), U(rng), 1 + U(rng), U(rng), U(rng), U(rng)};
    const auto f = vf_glc<double>(s, c);
    const double eps = 1e-6;
    State6<double> p = s, m = s;
    for (int i = 0; i < 6; ++i) {
      p[i] += eps * f[i];
      m[i] -= eps * f[i];
    }
    const double dE = (energy_glc(p, c) - energy_glc(m, c)) / (2 * eps);
    CHECK(std::fabs(dE) < 1e-8);
  }
}

TEST_CASE("rotation identity: nf chart map and its inverse") {
  const auto c = derive_constants({});
  const ChartState s{ChartId::DirZ1, {-0.2, 0.03, 1, 0.1, -0.1, 0}, 0};
  const auto n = nf_chart_map(s, c);
  CHECK(n.chart == ChartId::NormalForm);
  const auto b = nf_chart_inverse(n, c);
  for (int i = 0; i < 6; ++i) CHECK(b.x[i] == doctest::Approx(s.x[i]).epsilon(1e-12));
  CHECK_THROWS_AS(nf_chart_map(n, c), DomainError);
}

TEST_CASE("directional charts agree on their overlap") {
  const auto c = derive_constants({1, 2, 3, 4});
  const auto ctx = nf_context(c, 9);
  CHECK(dir_charts_agree(dir_z1_field(ctx->rotated_nf, 9), dir_z2_field(ctx->rotated_nf, 9)));
  CHECK(nf_chart_roundtrip(nf_chart_polys(c, 9)));
}

TEST_CASE("GLC to normal-form coordinates inverts") {
  const auto c = derive_constants({1, 2, 3, 4});
  const auto ctx = nf_context(c, 9);
  const std::array<double, 6> g{0.05, -0.12, 1, 0.08, -0.05, 0.02};
  const auto n = glc_to_nf(*ctx, g);
  const auto back = nf_to_glc(*ctx, n);
  for (int i = 0; i < 6; ++i) CHECK(back[i] == doctest::Approx(g[i]).epsilon(1e-13));
}
