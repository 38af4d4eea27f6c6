#pragma once

#include <cmath>

namespace sbc {

// Forward-mode dual number, one tangent direction. Enough of <cmath> for the
// vector fields to be differentiated exactly.
template <class T>
struct Dual {
  T v{}, d{};
  Dual() = default;
  Dual(T val) : v(val), d(0) {}  // NOLINT: implicit lift of constants
  Dual(T val, T der) : v(val), d(der) {}
};

template <class T> Dual<T> operator-(Dual<T> a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(Dual<T> a, Dual<T> b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(Dual<T> a, Dual<T> b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator*(Dual<T> a, Dual<T> b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(Dual<T> a, Dual<T> b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
template <class T> Dual<T> operator+(Dual<T> a, T b) { return {a.v + b, a.d}; }
template <class T> Dual<T> operator+(T a, Dual<T> b) { return {a + b.v, b.d}; }
template <class T> Dual<T> operator-(Dual<T> a, T b) { return {a.v - b, a.d}; }
template <class T> Dual<T> operator-(T a, Dual<T> b) { return {a - b.v, -b.d}; }
template <class T> Dual<T> operator*(Dual<T> a, T b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(T a, Dual<T> b) { return {a * b.v, a * b.d}; }
template <class T> Dual<T> operator/(Dual<T> a, T b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(T a, Dual<T> b) { return Dual<T>(a) / b; }
template <class T> bool operator<(Dual<T> a, Dual<T> b) { return a.v < b.v; }
template <class T> bool operator>(Dual<T> a, Dual<T> b) { return a.v > b.v; }
template <class T> bool operator<=(Dual<T> a, Dual<T> b) { return a.v <= b.v; }
template <class T> bool operator==(Dual<T> a, Dual<T> b) { return a.v == b.v; }
template <class T> bool operator<(Dual<T> a, T b) { return a.v < b; }
template <class T> bool operator>(Dual<T> a, T b) { return a.v > b; }
template <class T> bool operator<=(Dual<T> a, T b) { return a.v <= b; }
template <class T> bool operator==(Dual<T> a, T b) { return a.v == b; }

template <class T> Dual<T> sqrt(Dual<T> a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (2 * s)};
}
template <class T> Dual<T> sin(Dual<T> a) {
  using std::cos; using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T> Dual<T> cos(Dual<T> a) {
  using std::cos; using std::sin;
  return {cos(a.v), -a.d * sin(a.v)};
}
template <class T> Dual<T> fabs(Dual<T> a) { return a.v < 0 ? -a : a; }
template <class T> bool isfinite(Dual<T> a) { return std::isfinite(a.v) && std::isfinite(a.d); }
template <class T> T value_of(Dual<T> a) { return a.v; }

inline double value_of(double a) { return a; }
inline long double value_of(long double a) { return a; }

}  // namespace sbc
