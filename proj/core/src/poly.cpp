#include "sbc/poly.hpp"

#include <cmath>
#include <sstream>

#include "sbc/error.hpp"

namespace sbc {

namespace {
constexpr int kShift[6] = {56, 48, 40, 32, 24, 16};
constexpr int kXOffset = 64;
constexpr Poly::Key kXBias = Poly::Key(kXOffset) << 40;

Poly::Key add_keys(Poly::Key a, Poly::Key b) { return a + b - kXBias; }
}  // namespace

Poly::Key Poly::pack(const Exponents& e) {
  Key k = 0;
  for (int i = 0; i < 6; ++i) {
    const int v = i == X ? e[i] + kXOffset : e[i];
    if (v < 0 || v > 255) throw InvariantError("Poly: exponent out of packing range");
    k |= Key(v) << kShift[i];
  }
  return k;
}

Exponents Poly::unpack(Key k) {
  Exponents e{};
  for (int i = 0; i < 6; ++i) {
    e[i] = int((k >> kShift[i]) & 0xff);
    if (i == X) e[i] -= kXOffset;
  }
  return e;
}

Poly::Poly(const Rational& c) {
  if (c != 0) t_.emplace(pack({0, 0, 0, 0, 0, 0}), c);
}

Poly Poly::monomial(const Exponents& e, const Rational& c) {
  Poly p;
  p.add_term(e, c);
  return p;
}

Poly Poly::var(int v) {
  Exponents e{};
  e[v] = 1;
  return monomial(e);
}

void Poly::add_term_key(Key k, const Rational& c) {
  if (c == 0) return;
  auto [it, ins] = t_.try_emplace(k, c);
  if (!ins) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

void Poly::add_term(const Exponents& e, const Rational& c) { add_term_key(pack(e), c); }

Rational Poly::coeff(const Exponents& e) const {
  auto it = t_.find(pack(e));
  return it == t_.end() ? Rational(0) : it->second;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [k, c] : o.t_) add_term_key(k, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [k, c] : o.t_) add_term_key(k, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    t_.clear();
    return *this;
  }
  for (auto& kv : t_) kv.second *= c;
  return *this;
}

Poly Poly::mul(const Poly& a, const Poly& b, int max_zdeg) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  Rational tmp;
  for (const auto& [ka, ca] : a.t_) {
    const int da = zdeg_of(ka);
    if (max_zdeg >= 0 && da > max_zdeg) continue;
    for (const auto& [kb, cb] : b.t_) {
      if (max_zdeg >= 0 && da + zdeg_of(kb) > max_zdeg) continue;
      tmp = ca * cb;
      auto [it, ins] = r.t_.try_emplace(add_keys(ka, kb), tmp);
      if (!ins) it->second += tmp;
    }
  }
  for (auto it = r.t_.begin(); it != r.t_.end();) it = it->second == 0 ? r.t_.erase(it) : std::next(it);
  return r;
}

Poly Poly::pow(int n, int max_zdeg) const {
  if (n < 0) throw InvariantError("Poly::pow: negative exponent");
  Poly r(1), b = *this;
  while (n) {
    if (n & 1) r = mul(r, b, max_zdeg);
    n >>= 1;
    if (n) b = mul(b, b, max_zdeg);
  }
  return r;
}

Poly Poly::derivative(int v) const {
  Poly r;
  for (const auto& [k, c] : t_) {
    Exponents e = unpack(k);
    if (e[v] == 0) continue;
    const int n = e[v];
    e[v] -= 1;
    r.add_term(e, c * n);
  }
  return r;
}

Poly Poly::truncated(int max_zdeg) const {
  Poly r;
  for (const auto& [k, c] : t_)
    if (zdeg_of(k) <= max_zdeg) r.t_.emplace_hint(r.t_.end(), k, c);
  return r;
}

Poly Poly::zhomogeneous(int d) const {
  Poly r;
  for (const auto& [k, c] : t_)
    if (zdeg_of(k) == d) r.t_.emplace_hint(r.t_.end(), k, c);
  return r;
}

int Poly::min_zdeg() const {
  int m = -1;
  for (const auto& kv : t_) {
    const int d = zdeg_of(kv.first);
    if (m < 0 || d < m) m = d;
  }
  return m;
}

int Poly::max_zdeg() const {
  int m = -1;
  for (const auto& kv : t_) m = std::max(m, zdeg_of(kv.first));
  return m;
}

Poly Poly::substitute(const std::array<const Poly*, 6>& subs, int max_zdeg) const {
  // cached powers per slot; for X, keyed by the (possibly negative) exponent
  std::array<std::map<int, Poly>, 6> cache;
  Poly xw, xw_over_x;  // subs[X] = x + W ; W/x
  std::vector<Poly> xw_pows;
  if (subs[X]) {
    xw = *subs[X] - var(X);
    if (xw.min_zdeg() == 0) throw InvariantError("substitute: x-substitute must be x + O(z)");
    xw_over_x = mul(xw, monomial({0, 0, -1, 0, 0, 0}));
    xw_pows.push_back(Poly(1));
  }
  auto power = [&](int v, int n) -> const Poly& {
    auto it = cache[v].find(n);
    if (it != cache[v].end()) return it->second;
    Poly p;
    if (v == X) {
      // x^n (1 + W/x)^n = sum_k binom(n,k) x^n (W/x)^k
      Poly acc;
      for (int k = 0;; ++k) {
        while (int(xw_pows.size()) <= k) xw_pows.push_back(mul(xw_pows.back(), xw_over_x, max_zdeg));
        if (xw_pows[k].is_zero()) break;
        Exponents e{};
        e[X] = n;
        acc += mul(xw_pows[k], monomial(e, binomial(Rational(n), k)), max_zdeg);
        if (n >= 0 && k >= n) break;
      }
      p = acc;
    } else {
      if (n < 0) throw InvariantError("substitute: negative power of a non-x slot");
      auto prev = cache[v].find(n - 1);
      p = prev != cache[v].end() ? mul(prev->second, *subs[v], max_zdeg) : subs[v]->pow(n, max_zdeg);
    }
    return cache[v].emplace(n, std::move(p)).first->second;
  };
  Poly r;
  for (const auto& [k, c] : t_) {
    Exponents e = unpack(k);
    Exponents keep{};
    Poly term(c);
    bool zero = false;
    for (int v = 0; v < 6 && !zero; ++v) {
      if (e[v] == 0) continue;
      if (!subs[v]) {
        keep[v] = e[v];
        continue;
      }
      term = mul(term, power(v, e[v]), max_zdeg);
      zero = term.is_zero();
    }
    if (zero) continue;
    if (keep != Exponents{}) term = mul(term, monomial(keep), max_zdeg);
    r += term;
  }
  return r;
}

double Poly::eval(const std::array<double, 6>& v) const {
  double s = 0;
  for (const auto& [k, c] : t_) {
    const Exponents e = unpack(k);
    double m = c.get_d();
    for (int i = 0; i < 6; ++i)
      if (e[i]) m *= std::pow(v[i], e[i]);
    s += m;
  }
  return s;
}

long double Poly::eval_ld(const std::array<long double, 6>& v) const {
  long double s = 0;
  for (const auto& [k, c] : t_) {
    const Exponents e = unpack(k);
    // two-term split so the coefficient keeps long double precision
    const mpf_class q(c, 128);
    long double m = q.get_d();
    const mpf_class r = q - mpf_class(static_cast<double>(m), 128);
    m += r.get_d();
    for (int i = 0; i < 6; ++i)
      if (e[i]) m *= std::pow(v[i], e[i]);
    s += m;
  }
  return s;
}

Rational Poly::eval_exact(const std::array<Rational, 6>& v) const {
  Rational s = 0;
  for (const auto& [k, c] : t_) {
    const Exponents e = unpack(k);
    Rational m = c;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < std::abs(e[i]); ++j) m = e[i] > 0 ? Rational(m * v[i]) : Rational(m / v[i]);
    }
    s += m;
  }
  return s;
}

std::map<Poly::Key, Poly> Poly::split_by_coefficient() const {
  std::map<Key, Poly> out;
  constexpr Key zmask = (Key(0xff) << 56) | (Key(0xff) << 48);
  for (const auto& [k, c] : t_) {
    const Key coef = (k & ~zmask);
    const Key z = (k & zmask) | kXBias;
    out[coef].t_.emplace(z, c);
  }
  return out;
}

std::string rational_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw ConfigError("bad rational string '" + s + "'");
  q.canonicalize();
  return q;
}

nlohmann::json Poly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : t_) {
    const Exponents e = unpack(k);
    arr.push_back({{"e", e}, {"c", rational_string(c)}});
  }
  return arr;
}

Poly Poly::from_json(const nlohmann::json& j) {
  Poly p;
  for (const auto& t : j) p.add_term(t.at("e").get<Exponents>(), parse_rational(t.at("c").get<std::string>()));
  return p;
}

std::string Poly::to_string(const std::array<std::string, 6>& names) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    const Exponents e = unpack(k);
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    const Rational a = abs(c);
    bool any = false;
    for (int i = 0; i < 6; ++i) any |= e[i] != 0;
    if (a != 1 || !any) os << rational_string(a) << (any ? "*" : "");
    bool sep = false;
    for (int i = 0; i < 6; ++i) {
      if (!e[i]) continue;
      os << (sep ? "*" : "") << names[i];
      if (e[i] != 1) os << "^" << (e[i] < 0 ? "(" + std::to_string(e[i]) + ")" : std::to_string(e[i]));
      sep = true;
    }
  }
  return os.str();
}

nlohmann::json to_json(const PolyVec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : v) j.push_back(p.to_json());
  return j;
}

PolyVec polyvec_from_json(const nlohmann::json& j) {
  PolyVec v;
  for (int i = 0; i < 6; ++i) v[i] = Poly::from_json(j.at(i));
  return v;
}

Rational best_rational(double v, long max_den) {
  if (!std::isfinite(v)) throw DomainError("best_rational: non-finite");
  // exact dyadic value first: keep it when the denominator is already small
  Rational exact(v);
  if (exact.get_den() <= max_den) return exact;
  const bool neg = v < 0;
  Rational x = abs(exact);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational best = 0;
  for (int it = 0; it < 64; ++it) {
    mpz_class a = x.get_num() / x.get_den();
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    best = Rational(p2, q2);
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational frac = x - Rational(a);
    if (frac == 0) break;
    x = 1 / frac;
  }
  best.canonicalize();
  return neg ? Rational(-best) : best;
}

Rational binomial(const Rational& a, int n) {
  Rational r = 1;
  for (int k = 0; k < n; ++k) r = r * (a - k) / (k + 1);
  return r;
}

PolyEvaluator::PolyEvaluator(const Poly& p) {
  for (const auto& [k, c] : p.terms()) {
    Term t;
    t.e = Poly::unpack(k);
    const mpf_class q(c, 128);
    t.c = q.get_d();
    long double m = t.c;
    m += mpf_class(q - mpf_class(t.c, 128)).get_d();
    t.cl = m;
    for (int i = 0; i < 6; ++i) {
      lo_[i] = std::min(lo_[i], t.e[i]);
      hi_[i] = std::max(hi_[i], t.e[i]);
    }
    terms_.push_back(t);
  }
}

}  // namespace sbc
