#include "sbc/constants.hpp"

#include <cmath>
#include <numbers>

#include "sbc/error.hpp"
#include "sbc/special.hpp"

namespace sbc {

double DerivedConstants::A1() const { return 1.0 / std::cbrt(a1); }
double DerivedConstants::A2() const { return 1.0 / std::cbrt(a2); }

double btilde_factor() {
  return -24.0 * std::pow(3.0, 1.0 / 6.0) * std::sqrt(std::numbers::pi) * gamma_fn(-5.0 / 6.0) /
         gamma_fn(2.0 / 3.0);
}

DerivedConstants derive_constants(const MassParams& m) {
  for (double v : {m.m1, m.m2, m.m3, m.m4})
    if (!std::isfinite(v) || v <= 0) throw DomainError("masses must be positive and finite");
  DerivedConstants c{};
  c.masses = m;
  c.M1 = m.m1 * m.m2 / (m.m1 + m.m2);
  c.M2 = m.m3 * m.m4 / (m.m3 + m.m4);
  c.k1 = m.m1 * m.m2;
  c.k2 = m.m3 * m.m4;
  c.mu = (m.m1 + m.m2 + m.m3 + m.m4) / ((m.m1 + m.m2) * (m.m3 + m.m4));
  c.d1 = m.m1 * m.m3;
  c.d2 = m.m1 * m.m4;
  c.d3 = m.m2 * m.m3;
  c.d4 = m.m2 * m.m4;
  c.c1 = c.M1 / m.m2;
  c.c2 = c.M1 / m.m1;
  c.c3 = c.M2 / m.m4;
  c.c4 = c.M2 / m.m3;
  c.a1 = 16 * c.M1 * c.k1 * c.k1;
  c.a2 = 16 * c.M2 * c.k2 * c.k2;
  // printed scaling (a^{1/3}); see README for the note on a^{2/3}
  const double s1 = std::cbrt(c.a1) / (8 * c.k1 * c.M1);
  const double s2 = std::cbrt(c.a2) / (8 * c.k2 * c.M2);
  c.C1 = s1 * c.c1;
  c.C2 = s1 * c.c2;
  c.C3 = s2 * c.c3;
  c.C4 = s2 * c.c4;

  const double D12 = c.d1 + c.d2, D34 = c.d3 + c.d4, D13 = c.d1 + c.d3, D24 = c.d2 + c.d4;
  auto p = [](double x, int n) { return std::pow(x, n); };
  c.b0 = c.d1 + c.d2 + c.d3 + c.d4;
  c.b12 = p(c.C1, 2) * D34 + p(c.C2, 2) * D12;
  c.b22 = p(c.C4, 2) * D13 + p(c.C3, 2) * D24;
  c.b13 = p(c.C1, 3) * D34 - p(c.C2, 3) * D12;
  c.b23 = p(c.C4, 3) * D13 - p(c.C3, 3) * D24;
  c.b14 = p(c.C1, 4) * D34 + p(c.C2, 4) * D12;
  c.b24 = p(c.C4, 4) * D13 + p(c.C3, 4) * D24;
  c.bc = 6 * (c.C1 * c.C1 * (c.C4 * c.C4 * c.d3 + c.C3 * c.C3 * c.d4) +
              c.C2 * c.C2 * (c.C4 * c.C4 * c.d1 + c.C3 * c.C3 * c.d2));
  c.btilde_c = c.bc * btilde_factor();
  return c;
}

nlohmann::json to_json(const DerivedConstants& c) {
  nlohmann::json j;
  j["masses"] = {c.masses.m1, c.masses.m2, c.masses.m3, c.masses.m4};
  j["M1"] = c.M1; j["M2"] = c.M2; j["k1"] = c.k1; j["k2"] = c.k2; j["mu"] = c.mu;
  j["d"] = {c.d1, c.d2, c.d3, c.d4};
  j["c"] = {c.c1, c.c2, c.c3, c.c4};
  j["a1"] = c.a1; j["a2"] = c.a2;
  j["C"] = {c.C1, c.C2, c.C3, c.C4};
  j["b0"] = c.b0;
  j["b12"] = c.b12; j["b13"] = c.b13; j["b14"] = c.b14;
  j["b22"] = c.b22; j["b23"] = c.b23; j["b24"] = c.b24;
  j["bc"] = c.bc;
  j["btilde_c"] = c.btilde_c;
  return j;
}

}  // namespace sbc
