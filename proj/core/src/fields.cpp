#include "sbc/fields.hpp"

namespace sbc {

double potential_exact(double z1, double z2, double x, const DerivedConstants& c) {
  return potential_grad<double>(z1, z2, x, c).K;
}

template <class S>
static S energy_impl(const State6<S>& s, const DerivedConstants& c) {
  const auto g = potential_grad<S>(s[0], s[1], s[2], c);
  return S(0.5) * S(std::cbrt(c.a1)) * s[3] + S(0.5) * S(std::cbrt(c.a2)) * s[4] +
         S(0.5) * S(c.mu) * s[5] * s[5] - g.K;
}

double energy_glc(const State6<double>& s, const DerivedConstants& c) { return energy_impl(s, c); }
long double energy_glc(const State6<long double>& s, const DerivedConstants& c) {
  return energy_impl(s, c);
}

Matrix6 jacobian(FieldKind kind, const State6<double>& s, const DerivedConstants& c) {
  switch (kind) {
    case FieldKind::Glc:
      return jacobian_ad([&](const auto& v) { return vf_glc(v, c); }, s);
    case FieldKind::Uncoupled:
      return jacobian_ad([&](const auto& v) { return vf_uncoupled(v, c); }, s);
    case FieldKind::Polar:
      return jacobian_ad([&](const auto& v) { return vf_polar(v, c); }, s);
  }
  return {};
}

}  // namespace sbc
