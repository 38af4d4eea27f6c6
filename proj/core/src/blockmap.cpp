#include "sbc/blockmap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "sbc/error.hpp"
#include "sbc/fields.hpp"
#include "sbc/nf_context.hpp"
#include "sbc/dirblowup.hpp"

namespace sbc {

namespace {

template <class S>
using St6 = std::array<S, 6>;
template <class S>
using St7 = std::array<S, 7>;

template <class S>
St6<S> rotated_nf(const NormalFormContext& ctx, const St6<S>& g) {
  St6<S> n = glc_to_nf(ctx, g);
  const S a = n[0], b = n[1];
  n[0] = (a + b) / S(2);
  n[1] = (a - b) / S(2);
  return n;
}

template <class S>
S kappa_of(const NormalFormContext& ctx, const St6<S>& g) {
  return ctx.kappa_rot_eval(rotated_nf(ctx, g));
}

// Leading-order h-drift along the passage: |kappa0|^{8/3} (Hbar8(u) - sign(u) A+),
// u = zr1/zr2, kappa0 = zr2 (3 zr1^2 + zr2^2)/3.
double drift_F(double zr1, double zr2) {
  if (zr2 == 0) return 0;
  const double u = zr1 / zr2;
  const double k0 = zr2 * (3 * zr1 * zr1 + zr2 * zr2) / 3;
  const double sg = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
  return std::pow(std::fabs(k0), 8.0 / 3) * (hbar8(u) - sg * hbar8_aplus());
}

struct Corrected {
  double x, h1, h2, y;
};

// Normal-form centre coordinates with the section-dependent drift removed.
template <class S>
Corrected corrected(const NormalFormContext& ctx, const St6<S>& g) {
  const St6<S> n = rotated_nf(ctx, g);
  const double x = double(n[2]);
  const double F = drift_F(double(n[0]), double(n[1])) * std::pow(x, -5.0);
  return {x, double(n[3]) - ctx.rh_coeff_h1.get_d() * F, double(n[4]) + ctx.rh_coeff_h2.get_d() * F, double(n[5])};
}

template <class S>
St6<S> glc_from_rotated(S zr1, S zr2, const BlockMapOptions& o) {
  return {zr1 + zr2, zr1 - zr2, S(1), S(o.h1_star), S(o.h2_star), S(o.y_star)};
}

template <class S>
St6<S> entry_state_t(double s, const NormalFormContext& ctx, const BlockMapOptions& o) {
  const S d = S(o.delta);
  // start from the leading level zr2 (3 delta^2 + zr2^2) / 3 = s, then secant
  // on the full kappa~
  S a = S(s) / (d * d);
  for (int it = 0; it < 50; ++it) a -= (a * (S(3) * d * d + a * a) / S(3) - S(s)) / (d * d + a * a);
  S fa = kappa_of(ctx, glc_from_rotated<S>(-d, a, o)) - S(s);
  S b = a * S(1.01);
  S fb = kappa_of(ctx, glc_from_rotated<S>(-d, b, o)) - S(s);
  const S eps = std::numeric_limits<S>::epsilon();
  for (int it = 0; it < 60 && fb != S(0); ++it) {
    if (fb == fa) break;
    const S c = b - fb * (b - a) / (fb - fa);
    a = b;
    fa = fb;
    b = c;
    fb = kappa_of(ctx, glc_from_rotated<S>(-d, b, o)) - S(s);
    if (std::fabs(b - a) <= S(4) * eps * std::fabs(b)) break;
  }
  if (!(std::fabs(fb) <= S(1e-10) * std::fabs(S(s))))
    throw DomainError("entry_state: kappa level not reached for s=" + std::to_string(s));
  return glc_from_rotated<S>(-d, b, o);
}

template <class S>
BlockMapRow run(double s, const DerivedConstants& c, const BlockMapOptions& o,
                std::vector<PassageSample>* nodes = nullptr) {
  const auto ctx = nf_context(c, o.nf_weight);
  const St6<S> g0 = entry_state_t<S>(s, *ctx, o);

  const FieldFn<S, 7> f = [&c, unc = o.uncoupled](S, const St7<S>& y) {
    const St6<S> z{y[0], y[1], y[2], y[3], y[4], y[5]};
    const St6<S> d = unc ? vf_uncoupled<S>(z, c) : vf_glc<S>(z, c);
    return St7<S>{d[0], d[1], d[2], d[3], d[4], d[5], z[0] * z[0] * z[1] * z[1]};
  };
  SectionSpec<S, 7> sec;
  sec.name = "zr1=+delta";
  sec.level = [d = S(o.delta)](const St7<S>& y) { return (y[0] + y[1]) / S(2) - d; };
  sec.direction = CrossDirection::Increasing;
  sec.scale = S(o.delta);
  const S bound = S(o.tube) * std::max(S(o.delta), std::fabs((g0[0] - g0[1]) / S(2)));
  const GuardFn<S, 7> guard = [bound](S, const St7<S>& y) -> std::string {
    const S r1 = std::fabs((y[0] + y[1]) / S(2)), r2 = std::fabs((y[0] - y[1]) / S(2));
    if (r1 > bound || r2 > bound) return "trajectory left the tube";
    return {};
  };
  const St7<S> y0{g0[0], g0[1], g0[2], g0[3], g0[4], g0[5], S(0)};
  auto res = integrate_to_section<S, 7>(f, S(0), y0, sec, S(1e15), o.cfg, guard);
  const auto& y1 = res.hit.y;
  if (nodes)
    for (std::size_t k = 0; k < res.trajectory.t.size(); ++k) {
      const auto& y = res.trajectory.y[k];
      nodes->push_back({double(res.trajectory.t[k]),
                        {double(y[0]), double(y[1]), double(y[2]), double(y[3]), double(y[4]), double(y[5])},
                        double(y[6])});
    }
  const St6<S> g1{y1[0], y1[1], y1[2], y1[3], y1[4], y1[5]};

  BlockMapRow r;
  r.s = s;
  for (int i = 0; i < 6; ++i) {
    r.entry[i] = double(g0[i]);
    r.exit[i] = double(g1[i]);
  }
  r.time_rescaled = double(res.hit.t);
  r.time_physical = double(y1[6]);
  r.steps = long(res.trajectory.steps.size());
  r.dh1_raw = double(g1[3] - g0[3]);
  r.dh2_raw = double(g1[4] - g0[4]);

  const St6<S> n0 = rotated_nf(*ctx, g0);
  r.v = std::fabs(double(ctx->kappa_rot_eval(n0)));
  {
    // directional chart: u^ = zr1, v^ = zr2 / zr1 on the entry point
    ChartState cs{ChartId::DirZ1, {double(n0[0]), double(n0[1] / n0[0]), double(n0[2]), double(n0[3]),
                                   double(n0[4]), double(n0[5])}, 0};
    r.v_nf = std::fabs(nf_chart_map(cs, c).x[1]);
  }

  if (o.uncoupled) {
    r.dh1 = r.dh1_raw;
    r.dh2 = r.dh2_raw;
    r.dx = double(g1[2] - g0[2]);
    r.dy = double(g1[5] - g0[5]);
    r.conserved_drift = std::max({std::fabs(r.dh1), std::fabs(r.dh2), std::fabs(r.dy)});
  } else {
    const Corrected a = corrected(*ctx, g0), b = corrected(*ctx, g1);
    r.dh1 = b.h1 - a.h1;
    r.dh2 = b.h2 - a.h2;
    r.dx = b.x - a.x;
    r.dy = b.y - a.y;
    r.energy_drift = double(std::fabs(energy_glc(g1, c) - energy_glc(g0, c)));
  }
  return r;
}

}  // namespace

nlohmann::json BlockMapOptions::to_json() const {
  return {{"delta", delta},       {"h1_star", h1_star},  {"h2_star", h2_star},       {"y_star", y_star},
          {"uncoupled", uncoupled}, {"extended", extended}, {"nf_weight", nf_weight}, {"tube", tube},
          {"abs_tol", cfg.abs_tol}, {"rel_tol", cfg.rel_tol}, {"method_order", cfg.method_order}};
}

nlohmann::json to_json(const BlockMapRow& r) {
  return {{"s", r.s},
          {"v", r.v},
          {"v_nf", r.v_nf},
          {"dh1", r.dh1},
          {"dh2", r.dh2},
          {"dx", r.dx},
          {"dy", r.dy},
          {"dh1_raw", r.dh1_raw},
          {"dh2_raw", r.dh2_raw},
          {"time_rescaled", r.time_rescaled},
          {"time_physical", r.time_physical},
          {"energy_drift", r.energy_drift},
          {"conserved_drift", r.conserved_drift},
          {"steps", r.steps},
          {"entry", r.entry},
          {"exit", r.exit}};
}

double min_offset(const DerivedConstants& c, const BlockMapOptions& o) {
  const double tol = std::max(o.cfg.abs_tol, o.cfg.rel_tol);
  return std::pow(1e3 * tol / (c.btilde_c * c.A1()), 3.0 / 8);
}

std::array<double, 6> entry_state(double s, const DerivedConstants& c, const BlockMapOptions& o) {
  const auto ctx = nf_context(c, o.nf_weight);
  if (o.extended) {
    const auto g = entry_state_t<long double>(s, *ctx, o);
    std::array<double, 6> r;
    for (int i = 0; i < 6; ++i) r[i] = double(g[i]);
    return r;
  }
  return entry_state_t<double>(s, *ctx, o);
}

BlockMapRow numeric_block_map(double s, const DerivedConstants& c, const BlockMapOptions& o) {
  if (!(o.delta > 0 && o.delta <= 1)) throw PreconditionError("block map: need 0 < delta <= 1");
  if (std::fabs(o.h1_star) >= o.delta || std::fabs(o.h2_star) >= o.delta || std::fabs(o.y_star) >= o.delta)
    throw PreconditionError("block map: base values must lie in B_delta");
  if (s == 0 || !std::isfinite(s)) throw PreconditionError("block map: offset must be nonzero");
  const double smin = min_offset(c, o);
  if (std::fabs(s) < smin) {
    std::ostringstream os;
    os << "offset |s|=" << std::fabs(s) << " is within the collision-orbit zone (below " << smin
       << " for tol " << std::max(o.cfg.abs_tol, o.cfg.rel_tol)
       << "); use a larger s or a tighter tolerance / extended precision";
    throw Error("collision_orbit", os.str());
  }
  return o.extended ? run<long double>(s, c, o) : run<double>(s, c, o);
}

std::vector<PassageSample> passage_trajectory(double s, const DerivedConstants& c, const BlockMapOptions& o) {
  numeric_block_map(s, c, o);  // same preconditions
  std::vector<PassageSample> nodes;
  if (o.extended)
    run<long double>(s, c, o, &nodes);
  else
    run<double>(s, c, o, &nodes);
  return nodes;
}

std::vector<double> log_offsets(double v_lo, double v_hi, int n) {
  if (!(v_lo > 0 && v_hi > v_lo) || n < 2) throw PreconditionError("log_offsets: need 0 < lo < hi and n >= 2");
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = v_lo * std::pow(v_hi / v_lo, double(i) / (n - 1));
  return s;
}

namespace {

// Runs job(i) for i in [0, n) on `workers` threads; results are indexed, so
// the merge order does not depend on scheduling.
template <class Job>
void parallel_for(std::size_t n, int workers, Job&& job) {
  workers = std::max(1, std::min<int>(workers, int(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) job(i);
    });
  for (auto& t : pool) t.join();
}

struct Outcome {
  bool ok = false;
  BlockMapRow row;
  SweepFailure fail;
};

std::vector<Outcome> run_all(const std::vector<double>& s, const DerivedConstants& c, const BlockMapOptions& o,
                             int workers) {
  nf_context(c, o.nf_weight);  // build once before fanning out
  std::vector<Outcome> out(s.size());
  parallel_for(s.size(), workers, [&](std::size_t i) {
    try {
      out[i].row = numeric_block_map(s[i], c, o);
      out[i].ok = true;
    } catch (const Error& e) {
      out[i].fail = {s[i], e.error_class(), e.what()};
    } catch (const std::exception& e) {
      out[i].fail = {s[i], "runtime_error", e.what()};
    }
  });
  return out;
}

}  // namespace

SweepResult sweep_and_fit(const std::vector<double>& s_values, const DerivedConstants& c, const BlockMapOptions& o,
                          int workers) {
  std::vector<double> s = s_values;
  std::sort(s.begin(), s.end());
  SweepResult r;
  for (auto& oc : run_all(s, c, o, workers)) {
    if (oc.ok)
      r.rows.push_back(oc.row);
    else
      r.failures.push_back(oc.fail);
  }
  r.ratio_target = -std::cbrt(c.a2 / c.a1);
  for (const auto& row : r.rows) {
    r.max_energy_drift = std::max(r.max_energy_drift, row.energy_drift);
    r.max_conserved_drift = std::max(r.max_conserved_drift, row.conserved_drift);
  }
  if (o.uncoupled) {
    r.fit_note = "uncoupled field conserves h1, h2, y; deltas are at the integration noise floor, no fit";
    return r;
  }
  if (r.rows.size() < 8) {
    r.fit_note = "fewer than 8 successful rows; no fit";
    return r;
  }
  std::vector<double> v;
  std::vector<std::vector<double>> d;
  std::vector<double> dh1;
  for (const auto& row : r.rows) {
    v.push_back(row.v);
    d.push_back({row.dh1, row.dh2});
    dh1.push_back(row.dh1);
    if (row.dh2 != 0)
      r.ratio_max_dev = std::max(r.ratio_max_dev, std::fabs(row.dh1 / row.dh2 / r.ratio_target - 1));
    else
      r.ratio_max_dev = std::numeric_limits<double>::infinity();
  }
  try {
    r.fit = fit_power_law(v, dh1);
    r.series = quasi_regular_fit(v, d, {"dh1", "dh2"});
  } catch (const Error& e) {
    r.fit_note = std::string("fit refused: ") + e.what();
    return r;
  }
  for (const auto& cand : r.series.candidates)
    if (cand.exp_num == 8 && cand.exp_den == 3) r.coefficient = cand.terms[0].coefficient[0];
  r.coefficient_ratio = r.coefficient / (c.btilde_c * c.A1());
  r.fitted = true;
  return r;
}

nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) j["rows"].push_back(to_json(row));
  j["failures"] = nlohmann::json::array();
  for (const auto& f : r.failures)
    j["failures"].push_back({{"s", f.s}, {"error_class", f.error_class}, {"message", f.message}});
  j["fitted"] = r.fitted;
  if (!r.fit_note.empty()) j["note"] = r.fit_note;
  if (r.fitted) {
    j["fit"] = to_json(r.fit);
    j["series"] = to_json(r.series);
    j["coefficient"] = r.coefficient;
    j["coefficient_ratio"] = r.coefficient_ratio;
    j["ratio_target"] = r.ratio_target;
    j["ratio_max_dev"] = r.ratio_max_dev;
  }
  j["max_energy_drift"] = r.max_energy_drift;
  j["max_conserved_drift"] = r.max_conserved_drift;
  return j;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "s,v,dh1,dh2,dx,dy,time_rescaled,time_physical\n";
  for (const auto& row : r.rows)
    os << row.s << ',' << row.v << ',' << row.dh1 << ',' << row.dh2 << ',' << row.dx << ',' << row.dy << ','
       << row.time_rescaled << ',' << row.time_physical << '\n';
  return os.str();
}

ContinuityReport c0_continuity_check(const std::vector<double>& s_values, const DerivedConstants& c,
                                     const BlockMapOptions& o, int workers) {
  std::vector<double> s = s_values;
  std::sort(s.begin(), s.end(), std::greater<>());
  std::vector<double> both;
  for (double x : s) {
    both.push_back(x);
    both.push_back(-x);
  }
  const auto out = run_all(both, c, o, workers);
  ContinuityReport rep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto &p = out[2 * i], &m = out[2 * i + 1];
    if (!p.ok) throw Error(p.fail.error_class, p.fail.message);
    if (!m.ok) throw Error(m.fail.error_class, m.fail.message);
    const double gap = std::max({std::fabs(p.row.dh1 - m.row.dh1), std::fabs(p.row.dh2 - m.row.dh2),
                                 std::fabs(p.row.dx - m.row.dx), std::fabs(p.row.dy - m.row.dy)});
    double raw = 0;
    for (int k = 2; k < 6; ++k) raw = std::max(raw, std::fabs(p.row.exit[k] - m.row.exit[k]));
    rep.max_energy_drift = std::max({rep.max_energy_drift, p.row.energy_drift, m.row.energy_drift});
    rep.s.push_back(s[i]);
    rep.gap.push_back(gap);
    rep.gap_raw.push_back(raw);
    if (i + 1 == s.size())
      rep.limit_dev = std::max({std::fabs(p.row.dh1), std::fabs(p.row.dh2), std::fabs(p.row.dx), std::fabs(p.row.dy)});
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.gap.size(); ++i)
    if (!(rep.gap[i] < rep.gap[i - 1])) rep.monotone = false;
  rep.fit = fit_power_law(rep.s, rep.gap);
  return rep;
}

nlohmann::json to_json(const ContinuityReport& r) {
  return {{"s", r.s},           {"gap", r.gap},   {"gap_raw", r.gap_raw}, {"fit", to_json(r.fit)},
          {"monotone", r.monotone}, {"limit_dev", r.limit_dev}, {"max_energy_drift", r.max_energy_drift}};
}

KappaDriftReport kappa_drift(const std::vector<double>& amplitudes, const DerivedConstants& c, int weight,
                             const IntegratorConfig& cfg) {
  using LD = long double;
  const auto ctx = nf_context(c, weight);
  std::array<PolyEvaluator, 6> X;
  for (int i = 0; i < 6; ++i) X[i] = PolyEvaluator(ctx->rotated_nf[i]);
  // the degree-7 integral; its defect along the weight-`weight` flow is what we measure
  const PolyEvaluator k7(ctx->kappa_rot.truncated(7));
  const FieldFn<LD, 6> f = [&X](LD, const St6<LD>& y) {
    St6<LD> d;
    for (int i = 0; i < 6; ++i) d[i] = X[i](y);
    return d;
  };
  KappaDriftReport rep;
  for (double u : amplitudes) {
    const St6<LD> y0{-LD(u), LD(0.3) * LD(u), 1, LD(0.1), LD(-0.1), 0};
    const auto tr = integrate<LD, 6>(f, 0, y0, LD(0.5) / LD(u), cfg);
    rep.amplitude.push_back(u);
    rep.drift.push_back(double(std::fabs(k7(tr.y.back()) - k7(y0))));
  }
  rep.fit = fit_power_law(rep.amplitude, rep.drift);
  return rep;
}

nlohmann::json to_json(const KappaDriftReport& r) {
  return {{"amplitude", r.amplitude}, {"drift", r.drift}, {"fit", to_json(r.fit)}};
}

}  // namespace sbc
