#include "doctest.h"

#include "sbc/poly.hpp"
#include "sbc/rmatrix.hpp"

using namespace sbc;

namespace {
Poly z1() { return Poly::var(Z1); }
Poly z2() { return Poly::var(Z2); }
}  // namespace

TEST_CASE("exact arithmetic and cancellation") {
  const Poly a = z1() + z2();
  const Poly b = z1() - z2();
  CHECK(a * b == z1() * z1() - z2() * z2());
  CHECK((a - a).is_zero());
  CHECK((a * Rational(1, 3)).coeff({1, 0, 0, 0, 0, 0}) == Rational(1, 3));
  CHECK(a.pow(3).size() == 4);
  CHECK(a.pow(5, 3).is_zero());
}

TEST_CASE("derivative, truncation, homogeneous parts") {
  const Poly p = z1().pow(3) * Rational(2) + z1() * z2() + Poly(Rational(7));
  CHECK(p.derivative(Z1) == z1() * z1() * Rational(6) + z2());
  CHECK(p.truncated(2) == z1() * z2() + Poly(Rational(7)));
  CHECK(p.zhomogeneous(3) == z1().pow(3) * Rational(2));
  CHECK(p.min_zdeg() == 0);
  CHECK(p.max_zdeg() == 3);
}

TEST_CASE("negative x powers and substitution") {
  const Poly p = Poly::monomial({2, 0, -5, 0, 0, 0}, Rational(3));
  CHECK(p.eval({2, 0, 2, 0, 0, 0}) == doctest::Approx(12.0 / 32));
  const Poly s = z1() + z2();
  const std::array<const Poly*, 6> subs{&s, nullptr, nullptr, nullptr, nullptr, nullptr};
  CHECK(Poly::monomial({2, 0, 0, 0, 0, 0}).substitute(subs, -1) == s * s);
}

TEST_CASE("canonical JSON round trip") {
  const Poly p = z1().pow(9) * Rational(4, 19) - z2().pow(9) * Rational(4, 19) + z1() * Rational(-1, 7);
  const auto j = p.to_json();
  CHECK(Poly::from_json(j) == p);
  CHECK(j.dump() == Poly::from_json(j).to_json().dump());
}

TEST_CASE("evaluator agrees with exact evaluation") {
  const Poly p = z1().pow(4) * Rational(1, 3) - z1() * z2().pow(2) + Poly::monomial({1, 0, -2, 1, 0, 0}, Rational(5));
  const std::array<double, 6> v{0.3, -0.7, 1.4, 0.2, 0.1, 0};
  CHECK(PolyEvaluator(p)(v) == doctest::Approx(p.eval(v)).epsilon(1e-15));
  const std::array<Rational, 6> q{Rational(1, 2), Rational(1, 3), Rational(2), Rational(1), Rational(0), Rational(0)};
  CHECK(p.eval_exact(q) == Rational(1, 48) - Rational(1, 18) + Rational(5, 8));
}

TEST_CASE("rational nullspace") {
  RMatrix m(2, 3);
  m(0, 0) = 1, m(0, 1) = 2, m(0, 2) = 3;
  m(1, 0) = 2, m(1, 1) = 4, m(1, 2) = 6;
  CHECK(m.rank() == 1);
  const RMatrix n = m.nullspace();
  CHECK(n.cols == 2);
  CHECK((m * n).is_zero());
}
