#include "sbc/nf_context.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "sbc/error.hpp"

namespace sbc {

namespace {

std::shared_ptr<NormalFormContext> build(const DerivedConstants& c, int W) {
  auto ctx = std::make_shared<NormalFormContext>();
  ctx->c = c;
  ctx->max_weight = W;
  ctx->params = nf_params(c, W);
  ctx->taylor = taylor_field(ctx->params);
  ctx->nf = normal_form(ctx->taylor, W);
  ctx->nf.certified = verify_conjugacy(ctx->taylor, ctx->nf);
  if (!ctx->nf.certified) throw InvariantError("normal form certificate failed");
  ctx->kappa = kappa_integral(ctx->nf.normal_form, W);
  ctx->kappa_rot = rotate_pi4_scalar(ctx->kappa);
  ctx->rotated_nf = rotate_pi4(ctx->nf.normal_form);

  const Poly rh = printed_Rh();
  const Poly xm5 = Poly::monomial({0, 0, -5, 0, 0, 0});
  const Poly h1 = ctx->nf.normal_form[H1].zhomogeneous(9);
  const Poly h2 = ctx->nf.normal_form[H2].zhomogeneous(9);
  ctx->rh_coeff_h1 = h1.coeff({9, 0, -5, 0, 0, 0}) / rh.coeff({9, 0, 0, 0, 0, 0});
  ctx->rh_coeff_h2 = h2.coeff({0, 9, -5, 0, 0, 0}) / rh.coeff({9, 0, 0, 0, 0, 0});
  ctx->rh_structure_ok = h1 == Poly::mul(rh, xm5) * ctx->rh_coeff_h1 &&
                         h2 == Poly::mul(swap_z(rh), xm5) * ctx->rh_coeff_h2;

  for (int i = 0; i < 6; ++i) {
    ctx->T_eval[i] = PolyEvaluator(ctx->nf.transform[i]);
    for (int j = 0; j < 6; ++j) {
      ctx->dT[i][j] = ctx->nf.transform[i].derivative(j);
      ctx->dT_eval[i][j] = PolyEvaluator(ctx->dT[i][j]);
    }
  }
  ctx->kappa_eval = PolyEvaluator(ctx->kappa);
  ctx->kappa_rot_eval = PolyEvaluator(ctx->kappa_rot);
  return ctx;
}

template <class S>
std::array<S, 6> apply_T(const NormalFormContext& ctx, const std::array<S, 6>& xi) {
  std::array<S, 6> r;
  for (int i = 0; i < 6; ++i) r[i] = ctx.T_eval[i](xi);
  return r;
}

template <class S>
std::array<S, 6> invert_T(const NormalFormContext& ctx, const std::array<S, 6>& g) {
  using M = Eigen::Matrix<S, 6, 6>;
  using V = Eigen::Matrix<S, 6, 1>;
  auto residual = [&](const std::array<S, 6>& xi) {
    const auto t = apply_T(ctx, xi);
    V r;
    for (int i = 0; i < 6; ++i) r(i) = t[i] - g[i];
    return r;
  };
  std::array<S, 6> xi = g;
  const S eps = std::numeric_limits<S>::epsilon();
  S prev = std::numeric_limits<S>::infinity();
  V r = residual(xi);
  for (int it = 0; it < 80; ++it) {
    M J;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) J(i, j) = ctx.dT_eval[i][j](xi);
    const V d = J.partialPivLu().solve(r);
    // damped step: halve until the residual decreases (full steps near the root)
    S lam = 1;
    std::array<S, 6> trial;
    V rt;
    for (int k = 0; k < 30; ++k) {
      for (int i = 0; i < 6; ++i) trial[i] = xi[i] - lam * d(i);
      rt = residual(trial);
      if (rt.allFinite() && rt.norm() < r.norm()) break;
      lam /= 2;
    }
    S dn = 0, xn = 0;
    for (int i = 0; i < 6; ++i) {
      dn = std::max(dn, S(std::fabs(lam * d(i))));
      xn = std::max(xn, S(std::fabs(trial[i])));
    }
    if (!std::isfinite(double(dn))) break;
    const bool stalled = !(rt.norm() < r.norm());
    if (!stalled) {
      xi = trial;
      r = rt;
    }
    if (dn <= S(8) * eps * std::max(S(1), xn)) return xi;
    // roundoff stagnation after quadratic convergence
    if (dn <= S(1e3) * eps * std::max(S(1), xn) && (dn >= prev / 2 || stalled)) return xi;
    if (stalled) break;
    prev = dn;
  }
  throw DomainError("glc_to_nf: transform inversion did not converge (state outside the normal-form chart)");
}

}  // namespace

std::shared_ptr<const NormalFormContext> nf_context(const DerivedConstants& c, int max_weight) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double, double, int>, std::shared_ptr<NormalFormContext>> cache;
  const auto key = std::make_tuple(c.masses.m1, c.masses.m2, c.masses.m3, c.masses.m4, max_weight);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build(c, max_weight)).first;
  return it->second;
}

std::array<double, 6> glc_to_nf(const NormalFormContext& ctx, const std::array<double, 6>& g) {
  return invert_T(ctx, g);
}
std::array<long double, 6> glc_to_nf(const NormalFormContext& ctx, const std::array<long double, 6>& g) {
  return invert_T(ctx, g);
}
std::array<double, 6> nf_to_glc(const NormalFormContext& ctx, const std::array<double, 6>& xi) {
  return apply_T(ctx, xi);
}
std::array<long double, 6> nf_to_glc(const NormalFormContext& ctx, const std::array<long double, 6>& xi) {
  return apply_T(ctx, xi);
}

}  // namespace sbc
