#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sbc/detail/dop853_tableau.hpp"
#include "sbc/error.hpp"

namespace sbc {

struct IntegratorConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double max_step = 1e3;
  double min_step = 1e-14;
  double first_step = 0;  // 0: automatic
  long max_steps = 200000;
  int method_order = 8;  // 8 -> DOP853, 5 -> Dormand-Prince 5(4)

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw PreconditionError("integrator: tolerances must be positive");
    if (!(min_step > 0) || !(min_step <= max_step)) throw PreconditionError("integrator: need 0 < min_step <= max_step");
    if (max_steps <= 0) throw PreconditionError("integrator: max_steps must be positive");
    if (method_order != 8 && method_order != 5) throw PreconditionError("integrator: method_order must be 5 or 8");
  }
};

template <class S, std::size_t N>
using VecN = std::array<S, N>;

// One accepted step with its interpolant.
template <class S, std::size_t N>
struct DenseStep {
  S t0{}, t1{};
  VecN<S, N> y0{};
  std::vector<VecN<S, N>> F;  // DOP853: 7 rows (Hairer form). DP5: 4 rows of x^k weights times h.
  int order = 8;

  VecN<S, N> eval(S t) const {
    const S h = t1 - t0;
    const S x = h == S(0) ? S(0) : (t - t0) / h;
    VecN<S, N> y{};
    if (order == 8) {
      for (std::size_t k = 0; k < F.size(); ++k) {
        const auto& f = F[F.size() - 1 - k];
        for (std::size_t i = 0; i < N; ++i) y[i] += f[i];
        const S m = (k % 2 == 0) ? x : S(1) - x;
        for (std::size_t i = 0; i < N; ++i) y[i] *= m;
      }
    } else {
      S p = x;
      for (std::size_t k = 0; k < F.size(); ++k) {
        for (std::size_t i = 0; i < N; ++i) y[i] += F[k][i] * p;
        p *= x;
      }
    }
    for (std::size_t i = 0; i < N; ++i) y[i] += y0[i];
    return y;
  }
};

template <class S, std::size_t N>
struct Trajectory {
  std::vector<S> t;
  std::vector<VecN<S, N>> y;
  std::vector<DenseStep<S, N>> steps;
  long n_rejected = 0, n_fevals = 0;

  S t_begin() const { return t.front(); }
  S t_end() const { return t.back(); }
  VecN<S, N> eval(S tq) const {
    if (steps.empty()) return y.front();
    const bool fwd = t.back() >= t.front();
    auto it = std::lower_bound(steps.begin(), steps.end(), tq, [fwd](const DenseStep<S, N>& s, S v) {
      return fwd ? s.t1 < v : s.t1 > v;
    });
    if (it == steps.end()) --it;
    return it->eval(tq);
  }
};

enum class CrossDirection { Increasing, Decreasing, Any };

template <class S, std::size_t N>
struct SectionSpec {
  std::string name;
  std::function<S(const VecN<S, N>&)> level;
  CrossDirection direction = CrossDirection::Any;
  S scale = S(1);
};

template <class S, std::size_t N>
struct SectionHit {
  S t{};
  VecN<S, N> y{};
  S residual{};  // level(y)
  S rate{};      // d level / dt at the hit
};

template <class S, std::size_t N>
using FieldFn = std::function<VecN<S, N>(S, const VecN<S, N>&)>;

// Optional per-step guard; return an empty string to continue, otherwise the
// reason for aborting (e.g. the orbit left the tube).
template <class S, std::size_t N>
using GuardFn = std::function<std::string(S, const VecN<S, N>&)>;

namespace detail {

template <class S, std::size_t N>
std::string state_string(S t, const VecN<S, N>& y) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << double(t) << " y=(";
  for (std::size_t i = 0; i < N; ++i) os << (i ? "," : "") << double(y[i]);
  os << ")";
  return os.str();
}

template <class S, std::size_t N>
class Stepper {
 public:
  Stepper(const FieldFn<S, N>& f, const IntegratorConfig& cfg) : f_(f), cfg_(cfg) {}

  // Attempt a step of size h from (t, y) with derivative f0. Returns the
  // scaled error norm and fills ynew, fnew and the stage array.
  S attempt(S t, const VecN<S, N>& y, const VecN<S, N>& f0, S h, VecN<S, N>& ynew, VecN<S, N>& fnew) {
    return cfg_.method_order == 8 ? attempt853(t, y, f0, h, ynew, fnew) : attempt54(t, y, f0, h, ynew, fnew);
  }

  DenseStep<S, N> dense(S t, const VecN<S, N>& y, const VecN<S, N>& f0, S h, const VecN<S, N>& ynew,
                        const VecN<S, N>& fnew) {
    DenseStep<S, N> d;
    d.t0 = t;
    d.t1 = t + h;
    d.y0 = y;
    if (cfg_.method_order == 8) {
      namespace tb = sbc::detail::dop853;
      d.order = 8;
      for (int s = tb::kStages + 1; s < tb::kStagesExt; ++s) {
        VecN<S, N> ys = y;
        for (int j = 0; j < s; ++j)
          if (tb::a[s][j] != 0)
            for (std::size_t i = 0; i < N; ++i) ys[i] += h * S(tb::a[s][j]) * K_[j][i];
        K_[s] = f_(t + S(tb::c[s]) * h, ys);
        ++fevals;
      }
      d.F.assign(7, VecN<S, N>{});
      for (std::size_t i = 0; i < N; ++i) {
        const S dy = ynew[i] - y[i];
        d.F[0][i] = dy;
        d.F[1][i] = h * f0[i] - dy;
        d.F[2][i] = S(2) * dy - h * (fnew[i] + f0[i]);
      }
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < tb::kStagesExt; ++s)
          if (tb::d[r][s] != 0)
            for (std::size_t i = 0; i < N; ++i) d.F[3 + r][i] += h * S(tb::d[r][s]) * K_[s][i];
    } else {
      d.order = 4;
      d.F.assign(4, VecN<S, N>{});
      for (int k = 0; k < 7; ++k)
        for (int j = 0; j < 4; ++j) {
          const S p = S(kP[k][j][0]) / S(kP[k][j][1]);
          if (p != 0)
            for (std::size_t i = 0; i < N; ++i) d.F[j][i] += h * p * K_[k][i];
        }
    }
    return d;
  }

  long fevals = 0;

 private:
  S scale_of(S a, S b) const {
    using std::fabs;
    return S(cfg_.abs_tol) + S(cfg_.rel_tol) * std::max(fabs(a), fabs(b));
  }

  S attempt853(S t, const VecN<S, N>& y, const VecN<S, N>& f0, S h, VecN<S, N>& ynew, VecN<S, N>& fnew) {
    namespace tb = sbc::detail::dop853;
    K_[0] = f0;
    for (int s = 1; s < tb::kStages; ++s) {
      VecN<S, N> ys = y;
      for (int j = 0; j < s; ++j)
        if (tb::a[s][j] != 0)
          for (std::size_t i = 0; i < N; ++i) ys[i] += h * S(tb::a[s][j]) * K_[j][i];
      K_[s] = f_(t + S(tb::c[s]) * h, ys);
      ++fevals;
    }
    ynew = y;
    for (int j = 0; j < tb::kStages; ++j)
      if (tb::a[tb::kStages][j] != 0)
        for (std::size_t i = 0; i < N; ++i) ynew[i] += h * S(tb::a[tb::kStages][j]) * K_[j][i];
    fnew = f_(t + h, ynew);
    ++fevals;
    K_[tb::kStages] = fnew;
    S e5n = 0, e3n = 0;
    for (std::size_t i = 0; i < N; ++i) {
      S e5 = 0, e3 = 0;
      for (int j = 0; j <= tb::kStages; ++j) {
        e5 += S(tb::e5[j]) * K_[j][i];
        const S b = j < tb::kStages ? S(tb::a[tb::kStages][j]) : S(0);
        e3 += (b - S(tb::e3_sub[j])) * K_[j][i];
      }
      const S sc = scale_of(y[i], ynew[i]);
      e5n += (e5 / sc) * (e5 / sc);
      e3n += (e3 / sc) * (e3 / sc);
    }
    if (e5n == 0 && e3n == 0) return S(0);
    using std::fabs;
    using std::sqrt;
    return fabs(h) * e5n / sqrt((e5n + S(0.01) * e3n) * S(N));
  }

  S attempt54(S t, const VecN<S, N>& y, const VecN<S, N>& f0, S h, VecN<S, N>& ynew, VecN<S, N>& fnew) {
    K_[0] = f0;
    for (int s = 1; s < 6; ++s) {
      VecN<S, N> ys = y;
      for (int j = 0; j < s; ++j)
        if (kA[s][j][0] != 0)
          for (std::size_t i = 0; i < N; ++i) ys[i] += h * (S(kA[s][j][0]) / S(kA[s][j][1])) * K_[j][i];
      K_[s] = f_(t + S(kC[s][0]) / S(kC[s][1]) * h, ys);
      ++fevals;
    }
    ynew = y;
    for (int j = 0; j < 6; ++j)
      for (std::size_t i = 0; i < N; ++i) ynew[i] += h * (S(kB[j][0]) / S(kB[j][1])) * K_[j][i];
    fnew = f_(t + h, ynew);
    ++fevals;
    K_[6] = fnew;
    S en = 0;
    for (std::size_t i = 0; i < N; ++i) {
      S e = 0;
      for (int j = 0; j < 7; ++j) e += (S(kE[j][0]) / S(kE[j][1])) * K_[j][i];
      e *= h;
      const S sc = scale_of(y[i], ynew[i]);
      en += (e / sc) * (e / sc);
    }
    using std::sqrt;
    return sqrt(en / S(N));
  }

  // Dormand-Prince 5(4) with Shampine's dense output, as exact fractions.
  static constexpr long double kC[6][2] = {{0, 1}, {1, 5}, {3, 10}, {4, 5}, {8, 9}, {1, 1}};
  static constexpr long double kA[6][5][2] = {
      {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}},
      {{1, 5}, {0, 1}, {0, 1}, {0, 1}, {0, 1}},
      {{3, 40}, {9, 40}, {0, 1}, {0, 1}, {0, 1}},
      {{44, 45}, {-56, 15}, {32, 9}, {0, 1}, {0, 1}},
      {{19372, 6561}, {-25360, 2187}, {64448, 6561}, {-212, 729}, {0, 1}},
      {{9017, 3168}, {-355, 33}, {46732, 5247}, {49, 176}, {-5103, 18656}}};
  static constexpr long double kB[6][2] = {{35, 384}, {0, 1}, {500, 1113}, {125, 192}, {-2187, 6784}, {11, 84}};
  static constexpr long double kE[7][2] = {{-71, 57600}, {0, 1},       {71, 16695}, {-71, 1920},
                                           {17253, 339200}, {-22, 525}, {1, 40}};
  static constexpr long double kP[7][4][2] = {
      {{1, 1}, {-8048581381.0L, 2820520608.0L}, {8663915743.0L, 2820520608.0L}, {-12715105075.0L, 11282082432.0L}},
      {{0, 1}, {0, 1}, {0, 1}, {0, 1}},
      {{0, 1}, {131558114200.0L, 32700410799.0L}, {-68118460800.0L, 10900136933.0L}, {87487479700.0L, 32700410799.0L}},
      {{0, 1}, {-1754552775.0L, 470086768.0L}, {14199869525.0L, 1410260304.0L}, {-10690763975.0L, 1880347072.0L}},
      {{0, 1}, {127303824393.0L, 49829197408.0L}, {-318862633887.0L, 49829197408.0L}, {701980252875.0L, 199316789632.0L}},
      {{0, 1}, {-282668133.0L, 205662961.0L}, {2019193451.0L, 616988883.0L}, {-1453857185.0L, 822651844.0L}},
      {{0, 1}, {40617522.0L, 29380423.0L}, {-110615467.0L, 29380423.0L}, {69997945.0L, 29380423.0L}}};

  const FieldFn<S, N>& f_;
  const IntegratorConfig& cfg_;
  std::array<VecN<S, N>, 16> K_{};
};

template <class S, std::size_t N>
S initial_step(const FieldFn<S, N>& f, S t0, const VecN<S, N>& y0, const VecN<S, N>& f0, S dir,
               const IntegratorConfig& cfg) {
  using std::fabs;
  using std::pow;
  using std::sqrt;
  if (cfg.first_step > 0) return S(cfg.first_step);
  const int order = cfg.method_order;
  S d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const S sc = S(cfg.abs_tol) + S(cfg.rel_tol) * fabs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = sqrt(d0 / S(N));
  d1 = sqrt(d1 / S(N));
  S h0 = (d0 < S(1e-5) || d1 < S(1e-5)) ? S(1e-6) : S(0.01) * d0 / d1;
  h0 = std::min(h0, S(cfg.max_step));
  VecN<S, N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
  const auto f1 = f(t0 + dir * h0, y1);
  S d2 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const S sc = S(cfg.abs_tol) + S(cfg.rel_tol) * fabs(y0[i]);
    d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
  }
  d2 = sqrt(d2 / S(N)) / h0;
  S h1 = (d1 <= S(1e-15) && d2 <= S(1e-15)) ? std::max(S(1e-6), h0 * S(1e-3))
                                              : pow(S(0.01) / std::max(d1, d2), S(1) / S(order + 1));
  return std::max(std::min(S(100) * h0, h1), S(cfg.min_step));
}

}  // namespace detail

// Core driver. Integrates from t0 towards t_end (either direction) and stops
// early when stop(t, y, step) returns true after an accepted step.
template <class S, std::size_t N, class Stop>
Trajectory<S, N> integrate_until(const FieldFn<S, N>& f, S t0, const VecN<S, N>& y0, S t_end,
                                 const IntegratorConfig& cfg, Stop&& stop, const GuardFn<S, N>& guard = {}) {
  using std::fabs;
  using std::pow;
  cfg.validate();
  Trajectory<S, N> tr;
  tr.t.push_back(t0);
  tr.y.push_back(y0);
  if (t_end == t0) return tr;
  const S dir = t_end > t0 ? S(1) : S(-1);
  detail::Stepper<S, N> st(f, cfg);
  S t = t0;
  VecN<S, N> y = y0;
  VecN<S, N> f0 = f(t, y);
  st.fevals = 1;
  S h = detail::initial_step(f, t0, y0, f0, dir, cfg);
  const S order = S(cfg.method_order == 8 ? 8 : 5);
  const S err_exp = S(-1) / order;
  long n = 0;
  VecN<S, N> ynew, fnew;
  while (dir * (t_end - t) > 0) {
    if (++n > cfg.max_steps)
      throw IntegrationError("max_steps exceeded at " + detail::state_string(t, y));
    h = std::min(h, S(cfg.max_step));
    // a remainder shorter than min_step (e.g. from a first step rounded to
    // double) is a legitimate final step, not an underflow
    const S rest = fabs(t_end - t);
    const bool final_sliver = rest < S(cfg.min_step);
    if (dir * (t + dir * h - t_end) > 0) h = rest;
    bool accepted = false;
    while (!accepted) {
      if (h < S(cfg.min_step) && !(final_sliver && h == rest))
        throw IntegrationError("step size underflow (possible non-regularised singularity) at " +
                               detail::state_string(t, y));
      const S err = st.attempt(t, y, f0, dir * h, ynew, fnew);
      bool finite = true;
      for (std::size_t i = 0; i < N; ++i) finite = finite && std::isfinite(double(ynew[i]));
      if (finite && err <= S(1)) {
        accepted = true;
        S fac = err == S(0) ? S(10) : S(0.9) * pow(err, err_exp);
        fac = std::min(S(10), std::max(S(0.2), fac));
        auto ds = st.dense(t, y, f0, dir * h, ynew, fnew);
        t = (fabs(t_end - (t + dir * h)) <= S(4) * std::numeric_limits<S>::epsilon() * fabs(t_end)) ? t_end
                                                                                                : t + dir * h;
        ds.t1 = t;
        y = ynew;
        f0 = fnew;
        tr.t.push_back(t);
        tr.y.push_back(y);
        tr.steps.push_back(std::move(ds));
        h *= fac;
      } else {
        ++tr.n_rejected;
        const S fac = finite ? std::max(S(0.2), S(0.9) * pow(err, err_exp)) : S(0.2);
        h *= fac;
      }
    }
    if (guard) {
      const std::string why = guard(t, y);
      if (!why.empty()) {
        tr.n_fevals = st.fevals;
        throw IntegrationError(why + " at " + detail::state_string(t, y));
      }
    }
    if (stop(tr)) break;
  }
  tr.n_fevals = st.fevals;
  return tr;
}

template <class S, std::size_t N>
Trajectory<S, N> integrate(const FieldFn<S, N>& f, S t0, const VecN<S, N>& y0, S t_end, const IntegratorConfig& cfg,
                           const GuardFn<S, N>& guard = {}) {
  return integrate_until(f, t0, y0, t_end, cfg, [](const Trajectory<S, N>&) { return false; }, guard);
}

// Direct re-integration from the start of a step to an arbitrary time inside
// it; used to polish event times beyond interpolant accuracy.
template <class S, std::size_t N>
VecN<S, N> step_to(const FieldFn<S, N>& f, S t0, const VecN<S, N>& y0, S t1, const IntegratorConfig& cfg) {
  IntegratorConfig c = cfg;
  c.first_step = double(std::max(std::fabs(double(t1 - t0)), cfg.min_step));
  c.max_step = std::max(c.first_step, cfg.max_step);
  auto tr = integrate(f, t0, y0, t1, c);
  return tr.y.back();
}

template <class S, std::size_t N>
struct SectionResult {
  SectionHit<S, N> hit;
  Trajectory<S, N> trajectory;
};

template <class S, std::size_t N>
SectionResult<S, N> integrate_to_section(const FieldFn<S, N>& f, S t0, const VecN<S, N>& y0,
                                         const SectionSpec<S, N>& sec, S t_max, const IntegratorConfig& cfg,
                                         const GuardFn<S, N>& guard = {}) {
  using std::fabs;
  bool found = false;
  SectionHit<S, N> hit;
  auto wanted = [&](S g0, S g1) {
    const bool up = g0 < S(0) && g1 >= S(0);
    const bool down = g0 > S(0) && g1 <= S(0);
    switch (sec.direction) {
      case CrossDirection::Increasing: return up;
      case CrossDirection::Decreasing: return down;
      default: return up || down;
    }
  };
  const S tol = S(1e-12) * sec.scale;
  auto stop = [&](const Trajectory<S, N>& tr) {
    const auto& ds = tr.steps.back();
    const S g0 = sec.level(ds.y0), g1 = sec.level(tr.y.back());
    if (!wanted(g0, g1)) return false;
    // bracket on the interpolant (Illinois false position)
    S a = ds.t0, b = ds.t1, ga = g0, gb = g1;
    int side = 0;
    S tc = b;
    for (int it = 0; it < 200; ++it) {
      tc = (a * gb - b * ga) / (gb - ga);
      const S gc = sec.level(ds.eval(tc));
      if (fabs(gc) <= tol * S(1e-2) || fabs(b - a) <= S(4) * std::numeric_limits<S>::epsilon() * fabs(b)) break;
      if ((gc > 0) == (gb > 0)) {
        b = tc;
        gb = gc;
        if (side == 1) ga /= 2;
        side = 1;
      } else {
        a = tc;
        ga = gc;
        if (side == -1) gb /= 2;
        side = -1;
      }
    }
    // polish with direct steps from the step start (secant on the true flow)
    VecN<S, N> yc = step_to(f, ds.t0, ds.y0, tc, cfg);
    S gc = sec.level(yc);
    const S dt = (ds.t1 - ds.t0) * S(1e-6);
    S rate = (sec.level(ds.eval(tc + dt)) - sec.level(ds.eval(tc - dt))) / (S(2) * dt);
    for (int it = 0; it < 30 && fabs(gc) > tol; ++it) {
      if (rate == S(0)) break;
      tc -= gc / rate;
      yc = step_to(f, ds.t0, ds.y0, tc, cfg);
      gc = sec.level(yc);
    }
    // transversality: the level function must actually move through zero
    const S span = fabs(g1 - g0) / std::max(fabs(ds.t1 - ds.t0), std::numeric_limits<S>::min());
    if (fabs(rate) <= S(1e-9) * std::max(span, sec.scale))
      throw IntegrationError("grazing crossing of section '" + sec.name + "' at " + detail::state_string(tc, yc));
    if (fabs(gc) > tol)
      throw IntegrationError("section '" + sec.name + "' residual above 1e-12*scale at " +
                             detail::state_string(tc, yc));
    hit = SectionHit<S, N>{tc, yc, gc, rate};
    found = true;
    return true;
  };
  auto tr = integrate_until(f, t0, y0, t_max, cfg, stop, guard);
  if (!found) throw IntegrationError("no crossing of section '" + sec.name + "' before t=" + std::to_string(double(t_max)));
  // end the trajectory exactly at the hit
  tr.t.back() = hit.t;
  tr.y.back() = hit.y;
  return SectionResult<S, N>{hit, std::move(tr)};
}

}  // namespace sbc
