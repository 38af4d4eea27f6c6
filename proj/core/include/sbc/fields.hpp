#pragma once

#include <array>
#include <cmath>

#include "sbc/constants.hpp"
#include "sbc/dual.hpp"
#include "sbc/error.hpp"

namespace sbc {

template <class S>
using State6 = std::array<S, 6>;

// K = sum_j d_j / |x + alpha_j z1^2 + beta_j z2^2|
struct PotentialTerm {
  double d, alpha, beta;
};

inline std::array<PotentialTerm, 4> potential_terms(const DerivedConstants& c) {
  return {{{c.d1, c.C2, -c.C4}, {c.d2, c.C2, c.C3}, {c.d3, -c.C1, -c.C4}, {c.d4, -c.C1, c.C3}}};
}

template <class S>
struct PotentialGrad {
  S K, Kz1, Kz2, Kx;
};

template <class S>
PotentialGrad<S> potential_grad(const S& z1, const S& z2, const S& x, const DerivedConstants& c) {
  PotentialGrad<S> g{S(0), S(0), S(0), S(0)};
  const S q1 = z1 * z1, q2 = z2 * z2;
  for (const auto& t : potential_terms(c)) {
    const S D = x + S(t.alpha) * q1 + S(t.beta) * q2;
    if (value_of(D) == 0) throw SingularError("potential: vanishing denominator");
    const S sg = S(value_of(D) > 0 ? 1.0 : -1.0);
    const S inv = S(1) / D;
    const S dd = S(t.d);
    g.K = g.K + sg * dd * inv;
    const S w = sg * dd * inv * inv;  // d/dD of d/|D| is -sg d / D^2
    g.Kz1 = g.Kz1 - w * S(2 * t.alpha) * z1;
    g.Kz2 = g.Kz2 - w * S(2 * t.beta) * z2;
    g.Kx = g.Kx - w;
  }
  return g;
}

double potential_exact(double z1, double z2, double x, const DerivedConstants& c);

template <class S>
void check_branch(const State6<S>& s) {
  if (!(value_of(S(1) + s[3] * s[0] * s[0]) > 0) || !(value_of(S(1) + s[4] * s[1] * s[1]) > 0))
    throw DomainError("branch condition 1 + h_i z_i^2 > 0 violated");
}

// Generalised Levi-Civita field, state (z1, z2, x, h1, h2, y).
template <class S>
State6<S> vf_glc(const State6<S>& s, const DerivedConstants& c) {
  using std::sqrt;
  check_branch(s);
  const S &z1 = s[0], &z2 = s[1], &x = s[2], &h1 = s[3], &h2 = s[4], &y = s[5];
  const S q1 = z1 * z1, q2 = z2 * z2;
  const S S1 = sqrt(S(1) + h1 * q1), S2 = sqrt(S(1) + h2 * q2);
  const auto g = potential_grad<S>(z1, z2, x, c);
  return {q2 * S1,
          q1 * S2,
          S(c.mu) * q1 * q2 * y,
          S(2 * c.A1()) * q2 * S1 * g.Kz1,
          S(2 * c.A2()) * q1 * S2 * g.Kz2,
          q1 * q2 * g.Kx};
}

template <class S>
State6<S> vf_uncoupled(const State6<S>& s, const DerivedConstants& c) {
  using std::sqrt;
  check_branch(s);
  const S &z1 = s[0], &z2 = s[1], &h1 = s[3], &h2 = s[4], &y = s[5];
  const S q1 = z1 * z1, q2 = z2 * z2;
  return {q2 * sqrt(S(1) + h1 * q1), q1 * sqrt(S(1) + h2 * q2), S(c.mu) * q1 * q2 * y,
          S(0), S(0), S(0)};
}

// Polar blow-up, state (r, theta, x, h1, h2, y), time d(tau_bar) = r d(tau).
// The h-rows carry z2^2 = r^2 sin^2 and z1^2 = r^2 cos^2 (pushforward of vf_glc).
template <class S>
State6<S> vf_polar(const State6<S>& s, const DerivedConstants& c) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S &r = s[0], &th = s[1], &x = s[2], &h1 = s[3], &h2 = s[4], &y = s[5];
  if (value_of(r) < 0) throw DomainError("polar chart requires r >= 0");
  const S cs = cos(th), sn = sin(th);
  const S z1 = r * cs, z2 = r * sn;
  const S b1 = S(1) + h1 * z1 * z1, b2 = S(1) + h2 * z2 * z2;
  if (!(value_of(b1) > 0) || !(value_of(b2) > 0))
    throw DomainError("branch condition 1 + h_i z_i^2 > 0 violated");
  const S S1 = sqrt(b1), S2 = sqrt(b2);
  const auto g = potential_grad<S>(z1, z2, x, c);
  const S sc2 = sn * sn * cs * cs;
  return {r * sn * cs * (cs * S2 + sn * S1),
          cs * cs * cs * S2 - sn * sn * sn * S1,
          S(c.mu) * r * r * r * y * sc2,
          S(2 * c.A1()) * r * sn * sn * S1 * g.Kz1,
          S(2 * c.A2()) * r * cs * cs * S2 * g.Kz2,
          r * r * r * sc2 * g.Kx};
}

// Rescaled Hamiltonian 1/2 a1^{1/3} h1 + 1/2 a2^{1/3} h2 + 1/2 mu y^2 - K.
double energy_glc(const State6<double>& s, const DerivedConstants& c);
long double energy_glc(const State6<long double>& s, const DerivedConstants& c);

using Matrix6 = std::array<std::array<double, 6>, 6>;

// Exact Jacobian by forward-mode differentiation; f must be generic in the
// scalar type (e.g. a lambda calling vf_glc<S>).
template <class F>
Matrix6 jacobian_ad(F&& f, const State6<double>& s) {
  Matrix6 J{};
  for (int j = 0; j < 6; ++j) {
    State6<Dual<double>> sd;
    for (int i = 0; i < 6; ++i) sd[i] = Dual<double>(s[i], i == j ? 1.0 : 0.0);
    const auto out = f(sd);
    for (int i = 0; i < 6; ++i) J[i][j] = out[i].d;
  }
  return J;
}

enum class FieldKind { Glc, Uncoupled, Polar };
Matrix6 jacobian(FieldKind kind, const State6<double>& s, const DerivedConstants& c);

}  // namespace sbc
