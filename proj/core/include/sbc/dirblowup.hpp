#pragma once

#include <array>
#include <string>

#include "sbc/charts.hpp"
#include "sbc/constants.hpp"
#include "sbc/normal_form.hpp"

namespace sbc {

// Directional blow-ups of the rotated normal form. Slots 0/1 hold (u^, v^) or
// (u-, v-); slots 2..5 keep (x, H1, H2, y).
//   DirZ1: (zr1, zr2) = (u^, u^ v^),  d tau^ = u^ d tau
//   DirZ2: (zr1, zr2) = (u- v-, v-),  d tau- = v- d tau
struct DirectionalField {
  ChartId chart = ChartId::DirZ1;
  PolyVec field;
  int source_weight = 9;   // weight of the normal form it came from
  std::string remainder;   // dropped part, e.g. "O(u^9)"
};

DirectionalField dir_z1_field(const PolyVec& rotated_nf, int source_weight);
DirectionalField dir_z2_field(const PolyVec& rotated_nf, int source_weight);

// Numerical evaluation from the cached degree-9 normal form of the masses.
std::array<double, 6> vf_dir_z1(const ChartState& s, const DerivedConstants& c);
std::array<double, 6> vf_dir_z2(const ChartState& s, const DerivedConstants& c);

// Checks that the two charts describe the same field on the overlap
// (u-, v-) = (1/v^, u^ v^), with d tau- / d tau^ = v^; exact over Q.
bool dir_charts_agree(const DirectionalField& z1, const DirectionalField& z2);

// Normal-form section coordinates from the DirZ1 chart:
//   u = u^,  v = u^{-3} kappa~(u^, u^ v^, H),
//   h1 -> h1 + (216/95) b_c a1^{-1/3} x^{-5} u^8 v^,  h2 -> h2 - (216/95) b_c a2^{-1/3} x^{-5} u^8 v^.
// As polynomials in (u^, v^, x, H1, H2, y).
struct ChartMap {
  PolyVec forward;  // (u^, v^, ...) -> (u, v, ...)
  PolyVec inverse;  // series reversion, truncated at `degree` in (u, v)
  int degree = 9;
};
ChartMap nf_chart_polys(const DerivedConstants& c, int degree = 9);
// Symbolic check: inverse(forward(.)) = id through `degree`.
bool nf_chart_roundtrip(const ChartMap& m);

ChartState nf_chart_map(const ChartState& s, const DerivedConstants& c);
ChartState nf_chart_inverse(const ChartState& s, const DerivedConstants& c);

}  // namespace sbc
