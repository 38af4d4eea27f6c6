#pragma once

#include <array>
#include <string>

#include "sbc/constants.hpp"

namespace sbc {

enum class ChartId { Physical, LeviCivita, GeneralisedLC, RotatedGLC, PolarBlowup, DirZ1, DirZ2, NormalForm };

std::string chart_name(ChartId id);

// Coordinates per chart:
//   Physical      (Q~1, Q~2, x, P~1, P~2, y)   rescaled positions/momenta
//   LeviCivita    (z~1, z~2, x, u1, u2, y)
//   GeneralisedLC (z1, z2, x, h1, h2, y)
//   RotatedGLC    (zr1, zr2, x, h1, h2, y)     zr = (z1+z2, z1-z2)/2
//   PolarBlowup   (r, theta, x, h1, h2, y)
//   DirZ1         (u^, v^, x, h1, h2, y)       (zr1, zr2) = (u^, u^ v^)
//   DirZ2         (u-, v-, x, h1, h2, y)       (zr1, zr2) = (u- v-, v-)
//   NormalForm    (u, v, x, h1, h2, y)         only via nf_chart_map
// clock = dt/d(chart time), i.e. the factor converting the chart's rescaled
// time back to physical time at this state.
struct ChartState {
  ChartId chart = ChartId::GeneralisedLC;
  std::array<double, 6> x{};
  double clock = 1;
};

ChartState make_state(ChartId id, const std::array<double, 6>& x, const DerivedConstants& c);

double clock_factor(ChartId id, const std::array<double, 6>& x, const DerivedConstants& c);

// Routes through GeneralisedLC. Branch u_i = +sqrt(1 + h_i z_i^2) throughout.
ChartState chart_transform(const ChartState& s, ChartId target, const DerivedConstants& c);

}  // namespace sbc
