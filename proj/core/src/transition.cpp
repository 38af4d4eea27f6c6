#include "sbc/transition.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "sbc/error.hpp"
#include "sbc/normal_form.hpp"
#include "sbc/special.hpp"

namespace sbc {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F&& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double s = f(c - x) + f(c + x);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  result = rk * h;
  err = std::fabs((rk - rg) * h);
}

template <class F>
double adaptive(F&& f, double a, double b, double tol, int depth = 0) {
  double r, e;
  gk15(f, a, b, r, e);
  if (e <= tol * std::max(1.0, std::fabs(r)) || depth > 40) return r;
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, tol, depth + 1) + adaptive(f, m, b, tol, depth + 1);
}

double eval_poly(const std::vector<double>& c, double u) {
  double s = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * u + *it;
  return s;
}

}  // namespace

Poly rh_from_engine() {
  static std::once_flag once;
  static Poly rh;
  std::call_once(once, [] {
    const auto c = derive_constants({1, 1, 1, 1});
    const auto p = nf_params(c, 9);
    const auto nf = normal_form(taylor_field(p), 9);
    Poly h1 = specialize_x(nf.normal_form[H1].zhomogeneous(9), Rational(1));
    // divide by b_c a1^{-1/3}
    rh = h1 * Rational(1 / (best_rational(c.bc) * p.A1));
  });
  return rh;
}

const std::vector<double>& rtilde_h_coeffs() {
  static std::once_flag once;
  static std::vector<double> coeffs;
  std::call_once(once, [] {
    const Poly rt = rotate_pi4_scalar(rh_from_engine());
    coeffs.assign(10, 0.0);
    for (const auto& [k, c] : rt.terms()) {
      const auto e = Poly::unpack(k);
      coeffs.at(e[0]) += c.get_d();
    }
  });
  return coeffs;
}

double hbar8_integrand(double u) {
  static const double k = std::pow(3.0, 8.0 / 3.0);
  return k * std::pow(1 + 3 * u * u, -11.0 / 3.0) * eval_poly(rtilde_h_coeffs(), u);
}

double hbar8(double ubar) {
  if (ubar == 0) return 0;
  const double s = ubar < 0 ? -1 : 1, U = std::fabs(ubar);
  // geometric break points keep the growing tail well resolved
  double total = 0, a = 0, b = std::min(U, 0.5);
  while (true) {
    total += adaptive([&](double u) { return hbar8_integrand(s * u); }, a, b, 1e-15);
    if (b >= U) break;
    a = b;
    b = std::min(U, 2 * b);
  }
  return s * total;
}

double hbar8_closed(double u) {
  const double u2 = u * u;
  return -72.0 / 95.0 * std::pow(3.0, 2.0 / 3.0) * u *
         (9 * (u2 * u2 + 2 * u2 - 3) / std::pow(3 * u2 + 1, 5.0 / 3.0) - 38 * hyp2f1_special(-3 * u2));
}

double hbar8_aplus() { return 0.5 * btilde_factor(); }

double h8_of_nu(double nu) {
  if (!(nu > 0) || nu > 1) throw DomainError("h8_of_nu: need 0 < nu <= 1");
  const double U = 1 / nu;
  const double e = std::pow(nu, 8.0 / 3.0);
  // hbar8 is odd: H(1/nu) - H(-1/nu) = 2 H(1/nu)
  return e * 2 * hbar8(U) + 432.0 / 95.0 * nu;
}

double H8Extrapolation::rel_error() const { return std::fabs(limit - reference) / reference; }

H8Extrapolation extrapolate_h8(const std::vector<double>& nus) {
  if (nus.size() < 2) throw PreconditionError("extrapolate_h8: need at least two nu values");
  H8Extrapolation r;
  r.nus = nus;
  r.reference = btilde_factor();
  Eigen::MatrixXd A(nus.size(), 2);
  Eigen::VectorXd b(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const double ratio = h8_of_nu(nus[i]) / std::pow(nus[i], 8.0 / 3.0);
    r.ratios.push_back(ratio);
    A(i, 0) = 1;
    A(i, 1) = std::cbrt(nus[i]);
    b(i) = ratio;
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  r.limit = x(0);
  r.slope = x(1);
  // monotone approach in the direction of decreasing nu
  std::vector<std::size_t> idx(nus.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return nus[i] > nus[j]; });
  r.monotone = true;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const double d0 = std::fabs(r.ratios[idx[k - 1]] - r.limit), d1 = std::fabs(r.ratios[idx[k]] - r.limit);
    if (!(d1 < d0)) r.monotone = false;
  }
  return r;
}

nlohmann::json to_json(const SectionCoords& s) {
  return {{"hyp", s.hyp}, {"x", s.x}, {"h1", s.h1}, {"h2", s.h2}, {"y", s.y}};
}

SectionCoords dulac_map(const DulacParams& p, const SectionCoords& s, TruncationInfo* info) {
  if (!(s.hyp > 0)) throw DomainError("dulac_map: hyperbolic coordinate must be positive");
  if (!(p.nu > 0)) throw DomainError("dulac_map: nu must be positive");
  SectionCoords r = s;
  if (p.rho_num == 1 && p.rho_den == 3) {
    r.hyp = std::cbrt(s.hyp / p.nu);
    if (info) info->order = "O(v^3 ln v)";
  } else if (p.rho_num == 3 && p.rho_den == 1) {
    r.hyp = p.nu * s.hyp * s.hyp * s.hyp;
    if (info) info->order = "O(u^9 ln u)";
  } else {
    throw DomainError("dulac_map: ratio of hyperbolicity must be 1/3 or 3");
  }
  return r;
}

SectionCoords smooth_transition(double nu, const DerivedConstants& c, const SectionCoords& s) {
  SectionCoords r = s;
  const double u8 = std::pow(s.hyp, 8);
  if (u8 == 0) return r;
  const double H = h8_of_nu(nu);
  r.h1 += c.bc * c.A1() * H * u8;
  r.h2 -= c.bc * c.A2() * H * u8;
  return r;
}

BlockMapPrediction block_map_prediction(const DerivedConstants& c) {
  BlockMapPrediction p;
  p.coeff_h1 = c.btilde_c * c.A1();
  p.coeff_h2 = -c.btilde_c * c.A2();
  p.coeff_h2_printed = c.btilde_c * c.A2();
  return p;
}

SectionCoords predicted_block_map(double v, const DerivedConstants& c, const SectionCoords& s,
                                  BlockMapPrediction* pred) {
  if (v < 0) throw DomainError("predicted_block_map: v must be non-negative");
  const auto p = block_map_prediction(c);
  if (pred) *pred = p;
  SectionCoords r = s;
  r.hyp = v;
  const double w = std::pow(v, 8.0 / 3.0);
  r.h1 += p.coeff_h1 * w;
  r.h2 += p.coeff_h2 * w;
  return r;
}

nlohmann::json to_json(const BlockMapPrediction& p) {
  return {{"exponent", std::to_string(p.exponent_num) + "/" + std::to_string(p.exponent_den)},
          {"coeff_h1", p.coeff_h1},
          {"coeff_h2", p.coeff_h2},
          {"coeff_h2_printed_sign", p.coeff_h2_printed},
          {"h2_sign_convention", "conservation: dh2 = -(a1/a2)^{1/3} dh1"},
          {"remainder", "O(v^3 ln v)"}};
}

// ------------------------------------------------------------------ fits

nlohmann::json to_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent}, {"coefficient", f.coefficient}, {"r_squared", f.r_squared},
          {"n", f.n}, {"residuals", f.residuals}};
}

PowerLawFit fit_power_law(const std::vector<double>& v, const std::vector<double>& y) {
  if (v.size() != y.size() || v.size() < 2) throw PreconditionError("fit_power_law: need >= 2 paired samples");
  const std::size_t n = v.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0) || !(std::fabs(y[i]) > 0)) throw DomainError("fit_power_law: data must be positive/nonzero");
    lx[i] = std::log(v[i]);
    ly[i] = std::log(std::fabs(y[i]));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw DomainError("fit_power_law: degenerate spread in v");
  PowerLawFit f;
  f.n = int(n);
  f.exponent = sxy / sxx;
  const double lc = my - f.exponent * mx;
  f.coefficient = std::exp(lc) * (y[0] < 0 ? -1 : 1);
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (lc + f.exponent * lx[i]);
    f.residuals.push_back(r);
    sse += r * r;
  }
  f.r_squared = syy > 0 ? 1 - sse / syy : 1;
  return f;
}

nlohmann::json to_json(const TransitionSeries& t) {
  auto term_json = [&](const SeriesTerm& s) {
    nlohmann::json c = nlohmann::json::object();
    for (std::size_t k = 0; k < s.coefficient.size(); ++k)
      c[k < t.components.size() ? t.components[k] : std::to_string(k)] = s.coefficient[k];
    return nlohmann::json{{"exponent", std::to_string(s.exp_num) + "/" + std::to_string(s.exp_den)},
                          {"log_power", s.log_power},
                          {"coefficient", c}};
  };
  nlohmann::json j;
  j["terms"] = nlohmann::json::array();
  for (const auto& s : t.terms) j["terms"].push_back(term_json(s));
  j["truncation"] = std::to_string(t.trunc_num) + "/" + std::to_string(t.trunc_den);
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : t.candidates)
    j["candidates"].push_back({{"exponent", std::to_string(c.exp_num) + "/" + std::to_string(c.exp_den)},
                               {"residual", c.residual}});
  if (t.best >= 0) {
    const auto& b = t.candidates[t.best];
    j["best_exponent"] = std::to_string(b.exp_num) + "/" + std::to_string(b.exp_den);
  }
  j["ratio_to_neighbours"] = t.ratio_to_neighbours;
  j["free_fit"] = to_json(t.free_fit);
  return j;
}

TransitionSeries quasi_regular_fit(const std::vector<double>& v, const std::vector<std::vector<double>>& deltas,
                                   const std::vector<std::string>& names, const QuasiRegularOptions& opt) {
  const std::size_t n = v.size();
  if (n < 8) throw PreconditionError("quasi_regular_fit: need at least 8 samples");
  if (deltas.size() != n) throw PreconditionError("quasi_regular_fit: size mismatch");
  const std::size_t ncomp = deltas[0].size();
  double vmin = v[0], vmax = v[0];
  for (double x : v) {
    if (!(x > 0)) throw DomainError("quasi_regular_fit: v must be positive");
    vmin = std::min(vmin, x);
    vmax = std::max(vmax, x);
  }
  // nominally 1.5 decades; the reference window [1e-3, 3e-2] is log10(30) ~ 1.477
  if (std::log10(vmax / vmin) < std::log10(30.0) - 1e-9)
    throw DomainError("quasi_regular_fit: samples must span at least log10(30) decades");

  TransitionSeries ts;
  ts.components = names;
  std::vector<double> primary(n);
  for (std::size_t i = 0; i < n; ++i) primary[i] = deltas[i][0];
  ts.free_fit = fit_power_law(v, primary);

  for (int num = 3; num <= 3 * opt.max_i; ++num) {
    const int g = std::gcd(num, 3);
    GridCandidate cand;
    cand.exp_num = num / g;
    cand.exp_den = 3 / g;
    const double e = double(num) / 3;
    const bool with_log = opt.log_term && num <= 9;
    const int nreg = std::max(0, opt.regular_corrections);
    const int ncol = 1 + nreg + (with_log ? 1 : 0);
    Eigen::MatrixXd A(n, ncol);
    for (std::size_t i = 0; i < n; ++i) {
      A(i, 0) = std::pow(v[i], e);
      for (int k = 1; k <= nreg; ++k) A(i, k) = std::pow(v[i], e + k);
      if (with_log) A(i, ncol - 1) = v[i] * v[i] * v[i] * std::log(v[i]);
    }
    std::vector<Eigen::VectorXd> sol(ncomp);
    for (std::size_t k = 0; k < ncomp; ++k) {
      Eigen::VectorXd b(n);
      Eigen::MatrixXd Aw = A;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = std::fabs(primary[i]) > 0 ? 1 / std::fabs(primary[i]) : 1;
        b(i) = deltas[i][k] * w;
        Aw.row(i) *= w;
      }
      sol[k] = Aw.colPivHouseholderQr().solve(b);
      if (k == 0) cand.residual = std::sqrt((Aw * sol[k] - b).squaredNorm() / double(n));
    }
    SeriesTerm lead{cand.exp_num, cand.exp_den, 0, {}};
    for (std::size_t k = 0; k < ncomp; ++k) lead.coefficient.push_back(sol[k](0));
    cand.terms.push_back(lead);
    for (int r = 1; r <= nreg; ++r) {
      SeriesTerm t{cand.exp_num + r * cand.exp_den, cand.exp_den, 0, {}};
      for (std::size_t k = 0; k < ncomp; ++k) t.coefficient.push_back(sol[k](r));
      cand.terms.push_back(t);
    }
    if (with_log) {
      SeriesTerm lt{3, 1, 1, {}};
      for (std::size_t k = 0; k < ncomp; ++k) lt.coefficient.push_back(sol[k](ncol - 1));
      cand.terms.push_back(lt);
    }
    ts.candidates.push_back(std::move(cand));
  }
  ts.best = 0;
  for (std::size_t i = 1; i < ts.candidates.size(); ++i)
    if (ts.candidates[i].residual < ts.candidates[ts.best].residual) ts.best = int(i);
  double nb = std::numeric_limits<double>::infinity();
  if (ts.best > 0) nb = std::min(nb, ts.candidates[ts.best - 1].residual);
  if (ts.best + 1 < int(ts.candidates.size())) nb = std::min(nb, ts.candidates[ts.best + 1].residual);
  const double rb = ts.candidates[ts.best].residual;
  ts.ratio_to_neighbours = rb > 0 ? nb / rb : std::numeric_limits<double>::infinity();
  ts.terms = ts.candidates[ts.best].terms;
  return ts;
}

}  // namespace sbc
