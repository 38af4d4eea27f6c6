#include "sbc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "sbc/blockmap.hpp"
#include "sbc/dirblowup.hpp"
#include "sbc/nf_context.hpp"
#include "sbc/error.hpp"
#include "sbc/fields.hpp"
#include "sbc/special.hpp"
#include "sbc/transition.hpp"

namespace sbc {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Poly zpart_at_x1(const Poly& p) { return specialize_x(p, Rational(1)); }

// p / q when p is a scalar multiple of q (both nonzero), else 0
double proportionality(const Poly& p, const Poly& q) {
  if (q.terms().empty() || p.terms().empty()) return 0;
  const auto& [k0, c0] = *q.terms().begin();
  const Rational s = p.coeff(Poly::unpack(k0)) / c0;
  if (s == 0) return 0;
  if (!(p == q * s)) return 0;
  return s.get_d();
}

}  // namespace

NormalFormReport normal_form_report(const DerivedConstants& c, int max_weight) {
  if (max_weight < 2 || max_weight > 19) throw PreconditionError("normal form: max degree must be in [2, 19]");
  const auto t0 = Clock::now();
  NormalFormReport r;
  r.max_weight = max_weight;
  const auto X = taylor_field(nf_params(c, max_weight));
  const auto nf = normal_form(X, max_weight);
  r.normal_form = nf.normal_form;
  r.certified = verify_conjugacy(X, nf);
  const auto& N = nf.normal_form;
  r.R61 = zpart_at_x1(coefficient_in_h(N[0], 2, 0));
  r.R62 = zpart_at_x1(coefficient_in_h(N[0], 0, 2));
  r.R61_matches = r.R61 == printed_R61();
  r.R62_matches = r.R62 == printed_R62();
  r.x_y_flat = N[2].terms().empty() && N[5].terms().empty();
  r.lowest_h_resonance = -1;
  for (int i : {3, 4})
    if (!N[i].terms().empty()) {
      const int d = N[i].min_zdeg();
      r.lowest_h_resonance = r.lowest_h_resonance < 0 ? d : std::min(r.lowest_h_resonance, d);
    }
  if (max_weight >= 9) {
    const Poly h1 = zpart_at_x1(N[3].zhomogeneous(9));
    const Poly h2 = zpart_at_x1(N[4].zhomogeneous(9));
    r.rh_scale = proportionality(h1, printed_Rh());
    r.rh_scale_h2 = proportionality(h2, swap_z(printed_Rh()));
    r.Rh_matches = r.rh_scale != 0 && std::fabs(r.rh_scale / (c.bc * c.A1()) - 1) < 1e-12 &&
                   std::fabs(r.rh_scale_h2 / (c.bc * c.A2()) - 1) < 1e-12;
    if (r.rh_scale != 0) {
      const Poly ref = printed_Rh();
      const auto& [k0, c0] = *ref.terms().begin();
      r.Rh = h1 * Rational(c0 / h1.coeff(Poly::unpack(k0)));
    }
  }
  // weighted conservation of the h-components, coefficientwise in floating point
  {
    double worst = 0, scale = 0;
    Poly comb = N[3] * Rational(best_rational(c.A2())) + N[4] * Rational(best_rational(c.A1()));
    for (const auto& [k, v] : comb.terms()) worst = std::max(worst, std::fabs(v.get_d()));
    for (const auto& [k, v] : N[3].terms()) scale = std::max(scale, std::fabs(v.get_d()));
    r.h_combination_zero = worst <= 1e-12 * std::max(scale, 1e-300);
  }
  if (max_weight >= 9) {
    r.kappa = kappa_integral(N, max_weight);
    r.kappa7 = zpart_at_x1(coefficient_in_h(r.kappa, 2, 0));
    r.kappa7_matches = r.kappa7 == printed_kappa7() &&
                       zpart_at_x1(coefficient_in_h(r.kappa, 0, 2)) == -swap_z(printed_kappa7());
  }
  r.seconds = since(t0);
  return r;
}

nlohmann::json to_json(const NormalFormReport& r) {
  nlohmann::json j;
  j["max_degree"] = r.max_weight;
  j["certified"] = r.certified;
  j["R61"] = r.R61.to_json();
  j["R62"] = r.R62.to_json();
  j["R61_matches"] = r.R61_matches;
  j["R62_matches"] = r.R62_matches;
  j["x_y_flat"] = r.x_y_flat;
  j["h_combination_zero"] = r.h_combination_zero;
  j["lowest_h_resonance_degree"] = r.lowest_h_resonance;
  if (r.max_weight >= 9) {
    j["Rh"] = r.Rh.to_json();
    j["Rh_scale_h1"] = r.rh_scale;
    j["Rh_scale_h2"] = r.rh_scale_h2;
    j["Rh_matches"] = r.Rh_matches;
    j["kappa"] = r.kappa.to_json();
    j["kappa7"] = r.kappa7.to_json();
    j["kappa7_matches"] = r.kappa7_matches;
  } else {
    j["note"] = r.lowest_h_resonance < 0 ? "no resonant terms in the h-components up to degree " +
                                               std::to_string(r.max_weight) + " (they first appear at degree 9)"
                                         : "unexpected h-resonance below degree 9";
  }
  j["normal_form"] = to_json(r.normal_form);
  return j;
}

bool KernelCertificate::passed() const {
  return adjoint_annihilates && deg9_kernel_dim == 1 && residual_nonzero && deg3_kernel_is_kappa_hat;
}

KernelCertificate kernel_certificate(const Poly& Rh) {
  KernelCertificate k;
  const auto rep = verify_no_foliation(Rh);
  k.adjoint_annihilates = rep.rh_in_kernel_of_adjoint;
  k.deg9_kernel_dim = homological_block(false, 8).kernel_dim();
  k.residual_nonzero = rep.rh_residual_norm2 > 0 && rep.rh_image_projection_norm2 < rep.rh_norm2;
  k.deg3_kernel_is_kappa_hat = rep.kernel_dim_deg3 == 1 && rep.deg3_kernel_is_kappa_hat;
  return k;
}

bool CheckContext::has_fault(const std::string& f) const {
  return std::find(faults.begin(), faults.end(), f) != faults.end();
}

const std::vector<std::pair<std::string, std::string>>& fault_registry() {
  static const std::vector<std::pair<std::string, std::string>> f = {
      {"rh-coefficient", "perturb one coefficient of the resonant h-polynomial before the kernel checks"},
      {"gamma-limit", "shift the Gamma-function reference of the H8 limit by 5%"},
  };
  return f;
}

namespace {

CheckResult check_constants(const CheckContext&) {
  CheckResult r;
  const auto c = derive_constants({});
  const bool ok = c.bc == 3.0 / 32 && c.a1 == 8 && c.a2 == 8 && c.mu == 1 && c.b0 == 4 &&
                  std::fabs(c.btilde_c - 3.0 / 32 * btilde_factor()) < 1e-12 && c.btilde_c > 23.6 &&
                  c.btilde_c < 23.7;
  r.passed = ok;
  r.detail = {{"bc", c.bc}, {"btilde_c", c.btilde_c}, {"a1", c.a1}, {"b0", c.b0}};
  return r;
}

CheckResult check_gamma(const CheckContext&) {
  CheckResult r;
  const double g1 = gamma_fn(1), gh = gamma_fn(0.5), g56 = gamma_fn(-5.0 / 6);
  const double ref56 = gamma_fn(1.0 / 6) / (-5.0 / 6);
  r.passed = std::fabs(g1 - 1) < 1e-14 && std::fabs(gh - std::sqrt(M_PI)) < 1e-14 &&
             std::fabs(g56 / ref56 - 1) < 1e-14 && std::fabs(g56 + 6.67958) < 1e-4 &&
             std::fabs(btilde_factor() - 251.99910555209325) < 1e-9;
  r.detail = {{"gamma(-5/6)", g56}, {"btilde_factor", btilde_factor()}};
  return r;
}

CheckResult check_normal_form(const CheckContext&) {
  CheckResult r;
  const auto rep = normal_form_report(derive_constants({}), 9);
  r.passed = rep.certified && rep.R61_matches && rep.R62_matches && rep.Rh_matches && rep.kappa7_matches &&
             rep.x_y_flat && rep.h_combination_zero && rep.lowest_h_resonance == 9;
  r.detail = {{"certified", rep.certified},       {"R61", rep.R61_matches},  {"R62", rep.R62_matches},
              {"Rh", rep.Rh_matches},             {"kappa7", rep.kappa7_matches}, {"x_y_flat", rep.x_y_flat},
              {"h_combination", rep.h_combination_zero}, {"seconds", rep.seconds}};
  return r;
}

CheckResult check_kernels(const CheckContext& ctx) {
  CheckResult r;
  Poly Rh = rh_from_engine();
  if (ctx.has_fault("rh-coefficient")) Rh.add_term({9, 0, 0, 0, 0, 0}, Rational(1, 1000));
  const auto k = kernel_certificate(Rh);
  r.passed = k.passed() && Rh == printed_Rh();
  r.detail = {{"adjoint_annihilates", k.adjoint_annihilates},
              {"deg9_kernel_dim", k.deg9_kernel_dim},
              {"residual_nonzero", k.residual_nonzero},
              {"deg3_kernel_is_kappa_hat", k.deg3_kernel_is_kappa_hat},
              {"engine_equals_printed", Rh == printed_Rh()}};
  return r;
}

std::vector<double> sorted_eigs(const Matrix6& J, double* max_imag) {
  Eigen::Matrix<double, 6, 6> M;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) M(i, j) = J[i][j];
  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(M, false);
  std::vector<double> e;
  *max_imag = 0;
  for (int i = 0; i < 6; ++i) {
    e.push_back(es.eigenvalues()(i).real());
    *max_imag = std::max(*max_imag, std::fabs(es.eigenvalues()(i).imag()));
  }
  std::sort(e.begin(), e.end());
  return e;
}

CheckResult check_polar_eigenvalues(const CheckContext& ctx) {
  CheckResult r;
  const auto c = derive_constants({});
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> U(-0.1, 0.1);
  const double s = 1 / std::sqrt(2.0);
  bool ok = true;
  nlohmann::json pts = nlohmann::json::array();
  for (double th : {M_PI / 4, -3 * M_PI / 4}) {
    const std::array<double, 6> st{0, th, 1 + U(rng), U(rng), U(rng), U(rng)};
    double im = 0;
    const auto e = sorted_eigs(jacobian(FieldKind::Polar, st, c), &im);
    const std::vector<double> want = th > 0 ? std::vector<double>{-3 * s, 0, 0, 0, 0, s}
                                            : std::vector<double>{-s, 0, 0, 0, 0, 3 * s};
    double err = im;
    for (int i = 0; i < 6; ++i) err = std::max(err, std::fabs(e[i] - want[i]));
    ok = ok && err < 1e-12;
    pts.push_back({{"theta", th}, {"eigenvalues", e}, {"max_error", err}});
  }
  r.passed = ok;
  r.detail = {{"points", pts}};
  return r;
}

CheckResult check_collision_manifold(const CheckContext& ctx) {
  CheckResult r;
  const auto c = derive_constants({});
  std::mt19937_64 rng(ctx.seed + 1);
  std::uniform_real_distribution<double> U(-0.3, 0.3), T(-M_PI, M_PI);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double th = T(rng);
    const auto a = vf_polar<double>({0, th, 1 + U(rng), U(rng), U(rng), U(rng)}, c);
    const auto b = vf_polar<double>({0, th, 1 + U(rng), U(rng), U(rng), U(rng)}, c);
    for (int i = 0; i < 6; ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  }
  // theta' = cos^3 - sin^3 vanishes only where tan = 1
  int zeros = 0;
  const int n = 3600;
  double prev = vf_polar<double>({0, -M_PI, 1, 0, 0, 0}, c)[1];
  for (int k = 1; k <= n; ++k) {
    const double th = -M_PI + 2 * M_PI * k / n;
    const double cur = vf_polar<double>({0, th, 1, 0, 0, 0}, c)[1];
    if ((prev < 0) != (cur < 0)) ++zeros;
    prev = cur;
  }
  const double eq1 = vf_polar<double>({0, M_PI / 4, 1, 0, 0, 0}, c)[1];
  const double eq2 = vf_polar<double>({0, -3 * M_PI / 4, 1, 0, 0, 0}, c)[1];
  r.passed = worst == 0 && zeros == 2 && std::fabs(eq1) < 1e-15 && std::fabs(eq2) < 1e-15;
  r.detail = {{"max_dependence_on_centre", worst}, {"sign_changes", zeros}};
  return r;
}

CheckResult check_hbar8(const CheckContext&) {
  CheckResult r;
  double worst = 0;
  for (int k = -80; k <= 80; ++k) {
    const double u = 0.25 * k;
    if (k == 0) {
      worst = std::max(worst, std::fabs(hbar8(0)));
      continue;
    }
    const double q = hbar8(u), cf = hbar8_closed(u);
    worst = std::max(worst, std::fabs(q - cf) / std::max(std::fabs(cf), 1e-300));
  }
  const bool odd = std::fabs(hbar8(3) + hbar8(-3)) <= 1e-12 * std::fabs(hbar8(3));
  r.passed = worst < 1e-10 && odd;
  r.detail = {{"max_rel_error", worst}, {"odd", odd}};
  return r;
}

CheckResult check_gamma_limit(const CheckContext& ctx) {
  CheckResult r;
  auto ex = extrapolate_h8({0.1, 0.05, 0.025});
  if (ctx.has_fault("gamma-limit")) ex.reference *= 1.05;
  const double rel = std::fabs(ex.limit / ex.reference - 1);
  bool positive = true;
  for (double nu : {0.1, 0.05, 0.025, 0.01}) positive = positive && h8_of_nu(nu) > 0;
  r.passed = rel < 0.01 && ex.monotone && positive;
  r.detail = {{"ratios", ex.ratios}, {"limit", ex.limit}, {"reference", ex.reference}, {"rel_error", rel}};
  return r;
}

CheckResult check_kappa_order(const CheckContext&) {
  CheckResult r;
  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-18;
  const auto rep = kappa_drift(log_offsets(0.05, 0.5, 8), derive_constants({}), 9, cfg);
  r.passed = rep.fit.exponent >= 7.5;
  r.detail = to_json(rep);
  return r;
}

CheckResult check_charts(const CheckContext&) {
  CheckResult r;
  const auto c = derive_constants({});
  const auto nfc = nf_context(c, 9);
  const auto d1 = dir_z1_field(nfc->rotated_nf, 9), d2 = dir_z2_field(nfc->rotated_nf, 9);
  const bool agree = dir_charts_agree(d1, d2);
  const bool round = nf_chart_roundtrip(nf_chart_polys(c, 9));
  // DirZ2 on v- = 0: u-' = 1 + 3 u-^2, nothing else moves
  Poly want = Poly::monomial({0, 0, 0, 0, 0, 0}) + Poly::monomial({2, 0, 0, 0, 0, 0}, 3);
  bool z2ok = true;
  for (int i = 0; i < 6; ++i) {
    Poly restricted;
    for (const auto& [k, v] : d2.field[i].terms())
      if (Poly::unpack(k)[1] == 0) restricted.add_term(Poly::unpack(k), v);
    z2ok = z2ok && (i == 0 ? restricted == want : restricted.terms().empty());
  }
  bool z1zero = true;
  for (int i = 0; i < 6; ++i)
    for (const auto& [k, v] : d1.field[i].terms()) {
      const auto e = Poly::unpack(k);
      if (e[0] == 0 && e[1] == 0) z1zero = false;
    }
  r.passed = agree && round && z2ok && z1zero;
  r.detail = {{"charts_agree", agree}, {"chart_map_roundtrip", round}, {"dirz2_collision_flow", z2ok},
              {"dirz1_origin_zero", z1zero}};
  return r;
}

CheckResult check_mass_independence(const CheckContext& ctx) {
  CheckResult r;
  std::mt19937_64 rng(ctx.seed + 2);
  std::uniform_real_distribution<double> U(0.5, 4.0);
  bool ok = true;
  nlohmann::json sets = nlohmann::json::array();
  for (int k = 0; k < 5; ++k) {
    const MassParams m{U(rng), U(rng), U(rng), U(rng)};
    const auto c = derive_constants(m);
    const auto rep = normal_form_report(c, 9);
    const bool good = rep.certified && rep.R61_matches && rep.R62_matches && rep.x_y_flat &&
                      std::fabs(rep.rh_scale / (c.bc * c.A1()) - 1) < 1e-9 &&
                      std::fabs(rep.rh_scale_h2 / (c.bc * c.A2()) - 1) < 1e-9 && rep.h_combination_zero;
    ok = ok && good;
    sets.push_back({{"masses", {m.m1, m.m2, m.m3, m.m4}}, {"ok", good}, {"rh_scale", rep.rh_scale}});
  }
  r.passed = ok;
  r.detail = {{"mass_sets", sets}};
  return r;
}

CheckResult check_conservation(const CheckContext&) {
  CheckResult r;
  const auto c = derive_constants({});
  BlockMapOptions o;
  const double tol = std::max(o.cfg.abs_tol, o.cfg.rel_tol);
  const auto coupled = numeric_block_map(3e-3, c, o);
  o.uncoupled = true;
  const auto unc = numeric_block_map(3e-3, c, o);
  r.passed = coupled.energy_drift < 10 * tol && unc.conserved_drift < 10 * tol;
  r.detail = {{"energy_drift", coupled.energy_drift}, {"uncoupled_drift", unc.conserved_drift}, {"tol", tol}};
  return r;
}

CheckResult check_block_map_ratio(const CheckContext&) {
  CheckResult r;
  const auto c = derive_constants({});
  BlockMapOptions o;
  double worst = 0, coef = 0;
  for (double s : {2e-3, 5e-3}) {
    const auto row = numeric_block_map(s, c, o);
    worst = std::max(worst, std::fabs(row.dh1 / row.dh2 + 1));
    coef = row.dh1 / (c.btilde_c * c.A1() * std::pow(row.v, 8.0 / 3));
  }
  r.passed = worst < 0.02 && std::fabs(coef - 1) < 0.05;
  r.detail = {{"max_ratio_dev", worst}, {"coefficient_ratio", coef}};
  return r;
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> reg = {
      {"constants", "equal-mass constants, b_c = 3/32 and btilde_c > 0", check_constants},
      {"gamma", "Gamma(1), Gamma(1/2), Gamma(-5/6) by recurrence, the Gamma-expression 251.999", check_gamma},
      {"normal-form", "degree-9 normal form: R61, R62, R_h, kappa7 exact; conjugacy certificate", check_normal_form},
      {"kernels", "X0* R_h = 0, 1-dim degree-9 adjoint kernel, R_h not in Im X0, degree-3 invariant", check_kernels},
      {"polar-eigenvalues", "1:3 and 3:1 saddles on the collision manifold", check_polar_eigenvalues},
      {"collision-manifold", "flow on r = 0 independent of the centre, equilibria only at tan = 1",
       check_collision_manifold},
      {"hbar8", "quadrature against the hypergeometric closed form on [-20, 20]", check_hbar8},
      {"gamma-limit", "H8(nu)/nu^{8/3} extrapolates to the Gamma-expression within 1%", check_gamma_limit},
      {"kappa-order", "degree-7 kappa drifts with order >= 7.5 along the truncated normal form",
       check_kappa_order},
      {"charts", "directional charts agree on the overlap; normal-form chart map inverts", check_charts},
      {"mass-independence", "R61, R62 mass independent; h-resonance scales as b_c a_i^{-1/3}",
       check_mass_independence},
      {"conservation", "energy (coupled) and h, y (uncoupled) conserved to 10x tolerance", check_conservation},
      {"block-map-ratio", "dh1/dh2 = -(a2/a1)^{1/3} and the btilde_c coefficient at two offsets",
       check_block_map_ratio},
  };
  return reg;
}

std::vector<CheckResult> run_checks(const CheckContext& ctx, const std::vector<std::string>& only) {
  for (const auto& f : ctx.faults) {
    const auto& fr = fault_registry();
    if (std::none_of(fr.begin(), fr.end(), [&](const auto& p) { return p.first == f; }))
      throw PreconditionError("unknown fault '" + f + "'");
  }
  for (const auto& name : only) {
    const auto& reg = check_registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const CheckSpec& s) { return s.name == name; }))
      throw PreconditionError("unknown check '" + name + "'");
  }
  std::vector<CheckResult> out;
  for (const auto& spec : check_registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.name) == only.end()) continue;
    const auto t0 = Clock::now();
    CheckResult r;
    try {
      r = spec.run(ctx);
    } catch (const Error& e) {
      r.passed = false;
      r.detail = {{"error_class", e.error_class()}, {"message", e.what()}};
    }
    r.name = spec.name;
    r.seconds = since(t0);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sbc
