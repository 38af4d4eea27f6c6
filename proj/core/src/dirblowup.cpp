#include "sbc/dirblowup.hpp"

#include <cmath>
#include <mutex>

#include "sbc/error.hpp"
#include "sbc/nf_context.hpp"

namespace sbc {

namespace {

// p / slot^k, exact; every term must carry the factor.
Poly divide_slot(const Poly& p, int slot, int k) {
  Poly r;
  for (const auto& [key, c] : p.terms()) {
    Exponents e = Poly::unpack(key);
    if (e[slot] < k) throw InvariantError("directional blow-up: field not divisible by the blow-up variable");
    e[slot] -= k;
    r.add_term(e, c);
  }
  return r;
}

Poly mono(int a, int b) { return Poly::monomial({a, b, 0, 0, 0, 0}); }

// (u-, v-) -> (1/v^, u^ v^) multiplied through by v^^M.
Poly reciprocal_substitute(const Poly& p, int M) {
  Poly r;
  for (const auto& [key, c] : p.terms()) {
    Exponents e = Poly::unpack(key);
    const int a = e[0], b = e[1];
    if (b - a + M < 0) throw InvariantError("reciprocal_substitute: M too small");
    e[0] = b;
    e[1] = b - a + M;
    r.add_term(e, c);
  }
  return r;
}

int max_slot_degree(const Poly& p, int slot) {
  int m = 0;
  for (const auto& [key, c] : p.terms()) m = std::max(m, Poly::unpack(key)[slot]);
  return m;
}

}  // namespace

DirectionalField dir_z1_field(const PolyVec& Y, int source_weight) {
  const Poly s1 = mono(1, 1);
  const std::array<const Poly*, 6> subs{nullptr, &s1, nullptr, nullptr, nullptr, nullptr};
  PolyVec Ys;
  for (int i = 0; i < 6; ++i) Ys[i] = Y[i].substitute(subs, -1);
  DirectionalField d;
  d.chart = ChartId::DirZ1;
  d.source_weight = source_weight;
  d.remainder = "O(u^" + std::to_string(source_weight) + ")";
  d.field[0] = divide_slot(Ys[0], 0, 1);
  d.field[1] = divide_slot(Ys[1] - Poly::mul(Poly::var(1), Ys[0]), 0, 2);
  for (int i = 2; i < 6; ++i) d.field[i] = divide_slot(Ys[i], 0, 1);
  return d;
}

DirectionalField dir_z2_field(const PolyVec& Y, int source_weight) {
  const Poly s0 = mono(1, 1);
  const std::array<const Poly*, 6> subs{&s0, nullptr, nullptr, nullptr, nullptr, nullptr};
  PolyVec Ys;
  for (int i = 0; i < 6; ++i) Ys[i] = Y[i].substitute(subs, -1);
  DirectionalField d;
  d.chart = ChartId::DirZ2;
  d.source_weight = source_weight;
  d.remainder = "O(v^" + std::to_string(source_weight) + ")";
  d.field[0] = divide_slot(Ys[0] - Poly::mul(Poly::var(0), Ys[1]), 1, 2);
  d.field[1] = divide_slot(Ys[1], 1, 1);
  for (int i = 2; i < 6; ++i) d.field[i] = divide_slot(Ys[i], 1, 1);
  return d;
}

bool dir_charts_agree(const DirectionalField& f1, const DirectionalField& f2) {
  int M = 0;
  for (const auto& p : f2.field) M = std::max(M, max_slot_degree(p, 0));
  M += 2;
  const Poly vM = mono(0, M);
  // d(u-)/d tau^ = -v^'/v^^2 ; times v^^M
  const Poly lhs_u = -Poly::mul(f1.field[1], mono(0, M - 2));
  // d(v-)/d tau^ = u^' v^ + u^ v^'
  const Poly lhs_v = Poly::mul(Poly::mul(f1.field[0], mono(0, 1)) + Poly::mul(f1.field[1], mono(1, 0)), vM);
  // right-hand sides carry the clock ratio v^
  auto rhs = [&](const Poly& p) { return Poly::mul(reciprocal_substitute(p, M), mono(0, 1)); };
  if (!(lhs_u == rhs(f2.field[0]))) return false;
  if (!(lhs_v == rhs(f2.field[1]))) return false;
  for (int i = 2; i < 6; ++i)
    if (!(Poly::mul(f1.field[i], vM) == rhs(f2.field[i]))) return false;
  return true;
}

namespace {

struct DirCache {
  DirectionalField z1, z2;
  std::array<PolyEvaluator, 6> e1, e2;
};

std::shared_ptr<const DirCache> dir_cache(const DerivedConstants& c) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double, double>, std::shared_ptr<DirCache>> cache;
  const auto key = std::make_tuple(c.masses.m1, c.masses.m2, c.masses.m3, c.masses.m4);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const auto ctx = nf_context(c, 9);
  auto d = std::make_shared<DirCache>();
  d->z1 = dir_z1_field(ctx->rotated_nf, 9);
  d->z2 = dir_z2_field(ctx->rotated_nf, 9);
  for (int i = 0; i < 6; ++i) {
    d->e1[i] = PolyEvaluator(d->z1.field[i]);
    d->e2[i] = PolyEvaluator(d->z2.field[i]);
  }
  cache.emplace(key, d);
  return d;
}

}  // namespace

std::array<double, 6> vf_dir_z1(const ChartState& s, const DerivedConstants& c) {
  if (s.chart != ChartId::DirZ1) throw DomainError("vf_dir_z1: state is not in the DirZ1 chart");
  const auto d = dir_cache(c);
  std::array<double, 6> r;
  for (int i = 0; i < 6; ++i) r[i] = d->e1[i](s.x);
  return r;
}

std::array<double, 6> vf_dir_z2(const ChartState& s, const DerivedConstants& c) {
  if (s.chart != ChartId::DirZ2) throw DomainError("vf_dir_z2: state is not in the DirZ2 chart");
  const auto d = dir_cache(c);
  std::array<double, 6> r;
  for (int i = 0; i < 6; ++i) r[i] = d->e2[i](s.x);
  return r;
}

ChartMap nf_chart_polys(const DerivedConstants& c, int degree) {
  const auto ctx = nf_context(c, 9);
  ChartMap m;
  m.degree = degree;
  const Poly s1 = mono(1, 1);
  const std::array<const Poly*, 6> subs{nullptr, &s1, nullptr, nullptr, nullptr, nullptr};
  const Poly kap = ctx->kappa_rot.substitute(subs, -1);
  const Rational k216(216, 95);
  const Poly corr = Poly::monomial({8, 1, -5, 0, 0, 0}, k216);
  for (int i = 0; i < 6; ++i) m.forward[i] = Poly::var(i);
  m.forward[1] = divide_slot(kap, 0, 3);
  m.forward[3] = Poly::var(H1) + corr * ctx->rh_coeff_h1;
  m.forward[4] = Poly::var(H2) - corr * ctx->rh_coeff_h2;
  for (auto& p : m.forward) p = p.truncated(degree);

  // v^ from v = f1(u, v^, H): iterate v^ <- v - (f1 - v^), with H expressed
  // through the target coordinates as well.
  Poly vh = Poly::var(1);
  Poly H1p = Poly::var(H1), H2p = Poly::var(H2);
  for (int it = 0; it <= degree + 2; ++it) {
    const std::array<const Poly*, 6> sb{nullptr, &vh, nullptr, &H1p, &H2p, nullptr};
    const Poly f1 = m.forward[1].substitute(sb, degree);
    const Poly next = (Poly::var(1) - (f1 - vh)).truncated(degree);
    const Poly c8 = Poly::mul(Poly::monomial({8, 0, -5, 0, 0, 0}, k216), next, degree);
    const Poly nH1 = Poly::var(H1) - c8 * ctx->rh_coeff_h1;
    const Poly nH2 = Poly::var(H2) + c8 * ctx->rh_coeff_h2;
    const bool done = next == vh && nH1 == H1p && nH2 == H2p;
    vh = next;
    H1p = nH1;
    H2p = nH2;
    if (done) break;
  }
  for (int i = 0; i < 6; ++i) m.inverse[i] = Poly::var(i);
  m.inverse[1] = vh;
  m.inverse[3] = H1p;
  m.inverse[4] = H2p;
  return m;
}

bool nf_chart_roundtrip(const ChartMap& m) {
  std::array<const Poly*, 6> sb{};
  for (int i = 0; i < 6; ++i) sb[i] = &m.forward[i];
  for (int i = 0; i < 6; ++i) {
    const Poly r = m.inverse[i].substitute(sb, m.degree);
    if (!(r == Poly::var(i))) return false;
  }
  return true;
}

namespace {
const ChartMap& chart_map_cached(const DerivedConstants& c) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double, double>, ChartMap> cache;
  const auto key = std::make_tuple(c.masses.m1, c.masses.m2, c.masses.m3, c.masses.m4);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, nf_chart_polys(c, 9)).first;
  return it->second;
}
}  // namespace

ChartState nf_chart_map(const ChartState& s, const DerivedConstants& c) {
  if (s.chart != ChartId::DirZ1) throw DomainError("nf_chart_map: state must be in the DirZ1 chart");
  const auto& m = chart_map_cached(c);
  ChartState r;
  r.chart = ChartId::NormalForm;
  r.clock = s.clock;
  for (int i = 0; i < 6; ++i) r.x[i] = m.forward[i].eval(s.x);
  // invertibility: d v / d v^ = 1 + ... must stay away from zero
  const double dv = m.forward[1].derivative(1).eval(s.x);
  if (!(std::fabs(dv) > 1e-6)) throw DomainError("nf_chart_map: outside the domain of invertibility");
  return r;
}

ChartState nf_chart_inverse(const ChartState& s, const DerivedConstants& c) {
  if (s.chart != ChartId::NormalForm) throw DomainError("nf_chart_inverse: state must be in the NormalForm chart");
  const auto& m = chart_map_cached(c);
  ChartState r;
  r.chart = ChartId::DirZ1;
  r.clock = s.clock;
  for (int i = 0; i < 6; ++i) r.x[i] = m.inverse[i].eval(s.x);
  // Newton polish on the exact forward map
  for (int it = 0; it < 20; ++it) {
    const double f = m.forward[1].eval(r.x) - s.x[1];
    const double df = m.forward[1].derivative(1).eval(r.x);
    if (df == 0) throw DomainError("nf_chart_inverse: singular chart map");
    r.x[1] -= f / df;
    r.x[3] = s.x[3] - (m.forward[3].eval(r.x) - r.x[3]);
    r.x[4] = s.x[4] - (m.forward[4].eval(r.x) - r.x[4]);
    if (std::fabs(f) <= 1e-16 * std::max(1.0, std::fabs(s.x[1]))) break;
  }
  return r;
}

}  // namespace sbc
