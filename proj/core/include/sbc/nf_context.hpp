#pragma once

#include <array>
#include <memory>

#include "sbc/constants.hpp"
#include "sbc/normal_form.hpp"

namespace sbc {

// Everything the numerical experiments need from the engine for one mass
// vector, computed once and shared (immutable after construction).
struct NormalFormContext {
  DerivedConstants c;
  int max_weight = 9;
  NormalFormParams params;
  PolyVec taylor;
  NormalFormResult nf;
  Poly kappa;           // approximate integral of nf.normal_form in (z1, z2, H1, H2)
  Poly kappa_rot;       // same in rotated coordinates
  PolyVec rotated_nf;   // rotate_pi4(nf.normal_form)
  // weight-9 h-components are coef_i * x^{-5} * R_h(z1,z2) (resp. R_h(z2,z1))
  Rational rh_coeff_h1, rh_coeff_h2;
  bool rh_structure_ok = false;
  std::array<std::array<Poly, 6>, 6> dT;  // Jacobian of the transform

  std::array<PolyEvaluator, 6> T_eval;
  std::array<std::array<PolyEvaluator, 6>, 6> dT_eval;
  PolyEvaluator kappa_eval, kappa_rot_eval;
};

std::shared_ptr<const NormalFormContext> nf_context(const DerivedConstants& c, int max_weight = 9);

// Normal-form coordinates of a generalised LC state: solves transform(xi) = g
// by Newton iteration started at xi = g. Throws DomainError if it fails.
std::array<double, 6> glc_to_nf(const NormalFormContext& ctx, const std::array<double, 6>& g);
std::array<long double, 6> glc_to_nf(const NormalFormContext& ctx, const std::array<long double, 6>& g);
std::array<double, 6> nf_to_glc(const NormalFormContext& ctx, const std::array<double, 6>& xi);
std::array<long double, 6> nf_to_glc(const NormalFormContext& ctx, const std::array<long double, 6>& xi);

}  // namespace sbc
