#pragma once

#include <nlohmann/json.hpp>

namespace sbc {

struct MassParams {
  double m1 = 1, m2 = 1, m3 = 1, m4 = 1;
};

struct DerivedConstants {
  MassParams masses;
  double M1, M2, k1, k2, mu;
  double d1, d2, d3, d4;
  double c1, c2, c3, c4;
  double a1, a2;
  double C1, C2, C3, C4;
  double b0, b12, b22, b13, b23, b14, b24, bc;
  double btilde_c;

  // a_i^{-1/3}, the factor in front of the h-equations
  double A1() const;
  double A2() const;
};

// -24 * 3^{1/6} sqrt(pi) Gamma(-5/6) / Gamma(2/3), about 251.999
double btilde_factor();

DerivedConstants derive_constants(const MassParams& m);

nlohmann::json to_json(const DerivedConstants& c);

}  // namespace sbc
