#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

namespace sbc {

using Rational = mpq_class;
using Exponents = std::array<int, 6>;

// Variable slots. In the normal-form engine these are (z1, z2, x, H1, H2, y);
// the directional charts reuse slots 0/1 for (u, v). Slot 2 (x) may carry a
// negative exponent. "zdeg" is the degree in slots 0 and 1 only.
enum Var : int { Z1 = 0, Z2 = 1, X = 2, H1 = 3, H2 = 4, Y = 5 };

class Poly {
 public:
  using Key = std::uint64_t;
  using Terms = std::map<Key, Rational>;

  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly monomial(const Exponents& e, const Rational& c = 1);
  static Poly var(int v);

  static Key pack(const Exponents& e);
  static Exponents unpack(Key k);
  static int zdeg_of(Key k) { return int(k >> 56) + int((k >> 48) & 0xff); }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  void add_term(const Exponents& e, const Rational& c);
  void add_term_key(Key k, const Rational& c);
  Rational coeff(const Exponents& e) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }

  // product truncated to zdeg <= max_zdeg (negative: no truncation)
  static Poly mul(const Poly& a, const Poly& b, int max_zdeg = -1);
  friend Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }
  Poly pow(int n, int max_zdeg = -1) const;

  Poly derivative(int v) const;
  Poly truncated(int max_zdeg) const;
  Poly zhomogeneous(int d) const;  // terms with zdeg == d
  int min_zdeg() const;            // -1 when zero
  int max_zdeg() const;

  // Substitute polynomials for variables: slot v -> subs[v]. Slots without a
  // substitute are kept. Negative powers are only allowed for slot X and need
  // subs[X] = x + (terms of positive zdeg).
  Poly substitute(const std::array<const Poly*, 6>& subs, int max_zdeg) const;

  double eval(const std::array<double, 6>& v) const;
  long double eval_ld(const std::array<long double, 6>& v) const;
  Rational eval_exact(const std::array<Rational, 6>& v) const;

  // Group by the non-z part of the monomial: key -> polynomial in (z1,z2).
  std::map<Key, Poly> split_by_coefficient() const;

  nlohmann::json to_json() const;
  static Poly from_json(const nlohmann::json& j);
  std::string to_string(const std::array<std::string, 6>& names = {"z1", "z2", "x", "H1", "H2", "y"}) const;

 private:
  Terms t_;
};

using PolyVec = std::array<Poly, 6>;

// Floating-point snapshot of a Poly for repeated evaluation (coefficients
// rounded once; powers tabulated per call).
class PolyEvaluator {
 public:
  PolyEvaluator() = default;
  explicit PolyEvaluator(const Poly& p);

  template <class S>
  S operator()(const std::array<S, 6>& v) const {
    std::array<std::vector<S>, 6> pw;
    for (int i = 0; i < 6; ++i) {
      pw[i].resize(std::size_t(hi_[i] - lo_[i] + 1));
      S up = S(1);
      for (int k = 0; k <= hi_[i]; ++k) {
        if (k >= lo_[i]) pw[i][k - lo_[i]] = up;
        up *= v[i];
      }
      S dn = S(1);
      for (int k = -1; k >= lo_[i]; --k) {
        dn /= v[i];
        pw[i][k - lo_[i]] = dn;
      }
    }
    S s = S(0);
    for (const auto& t : terms_) {
      S m = coef<S>(t);
      for (int i = 0; i < 6; ++i)
        if (t.e[i]) m *= pw[i][t.e[i] - lo_[i]];
      s += m;
    }
    return s;
  }
  bool empty() const { return terms_.empty(); }

 private:
  struct Term {
    double c;
    long double cl;
    std::array<int, 6> e;
  };
  template <class S>
  static S coef(const Term& t) {
    if constexpr (std::is_same_v<S, long double>) return t.cl;
    else return S(t.c);
  }
  std::vector<Term> terms_;
  std::array<int, 6> lo_{}, hi_{};
};

nlohmann::json to_json(const PolyVec& v);
PolyVec polyvec_from_json(const nlohmann::json& j);

std::string rational_string(const Rational& q);
Rational parse_rational(const std::string& s);

// Best rational approximation (continued fractions) with denominator bound.
Rational best_rational(double v, long max_den = 1000000000L);

Rational binomial(const Rational& a, int n);

}  // namespace sbc
