#include "sbc/special.hpp"

#include <cmath>
#include <numbers>

#include "sbc/error.hpp"

namespace sbc {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
  if (x <= 0 && x == std::nearbyint(x))
    throw DomainError("gamma_fn: pole at non-positive integer");
  if (x < 0.5) {
    // reflection: Γ(x)Γ(1-x) = π / sin(πx)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + kLanczosG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double hyp2f1_series(double a, double b, double c, double z) {
  if (!(std::fabs(z) < 1)) throw DomainError("hyp2f1_series: |z| must be < 1");
  double term = 1, sum = 1;
  for (int n = 0; n < 2000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) return sum;
  }
  throw InvariantError("hyp2f1_series: no convergence");
}

double hyp2f1_special(double z) {
  constexpr double a = 0.5, b = 2.0 / 3.0, c = 1.5;
  if (z > 0) throw DomainError("hyp2f1_special: requires z <= 0");
  if (z > -0.5) return hyp2f1_series(a, b, c, z);
  // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; w), w = z/(z-1) in [1/3, 1)
  const double w = z / (z - 1);
  const double pre = std::pow(1 - z, -a);
  const double bb = c - b;
  if (w < 0.5) return pre * hyp2f1_series(a, bb, c, w);
  // connection to 1-w; c-a-bb = 1/6 is not an integer
  const double s = c - a - bb;
  const double g1 = gamma_fn(c) * gamma_fn(s) / (gamma_fn(c - a) * gamma_fn(c - bb));
  const double g2 = gamma_fn(c) * gamma_fn(-s) / (gamma_fn(a) * gamma_fn(bb));
  const double y = 1 - w;
  return pre * (g1 * hyp2f1_series(a, bb, 1 - s, y) +
                std::pow(y, s) * g2 * hyp2f1_series(c - a, c - bb, 1 + s, y));
}

}  // namespace sbc
