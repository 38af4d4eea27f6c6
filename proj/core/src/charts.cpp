#include "sbc/charts.hpp"

#include <cmath>

#include "sbc/error.hpp"

namespace sbc {

using V6 = std::array<double, 6>;

std::string chart_name(ChartId id) {
  switch (id) {
    case ChartId::Physical: return "Physical";
    case ChartId::LeviCivita: return "LeviCivita";
    case ChartId::GeneralisedLC: return "GeneralisedLC";
    case ChartId::RotatedGLC: return "RotatedGLC";
    case ChartId::PolarBlowup: return "PolarBlowup";
    case ChartId::DirZ1: return "DirZ1";
    case ChartId::DirZ2: return "DirZ2";
    case ChartId::NormalForm: return "NormalForm";
  }
  return "?";
}

namespace {

double u_branch(double h, double z) {
  const double b = 1 + h * z * z;
  if (!(b > 0)) throw DomainError("branch condition 1 + h_i z_i^2 > 0 violated");
  return std::sqrt(b);
}

V6 to_glc(const ChartState& s, const DerivedConstants& c) {
  const V6& v = s.x;
  const double A1 = c.A1(), A2 = c.A2();
  switch (s.chart) {
    case ChartId::GeneralisedLC:
      u_branch(v[3], v[0]);
      u_branch(v[4], v[1]);
      return v;
    case ChartId::Physical: {
      if (v[0] <= 0 || v[1] <= 0) throw DomainError("Physical->LC needs Q~_i > 0");
      const double zt1 = std::sqrt(2 * v[0]), zt2 = std::sqrt(2 * v[1]);
      ChartState lc{ChartId::LeviCivita, {zt1, zt2, v[2], v[3] * zt1, v[4] * zt2, v[5]}, 1};
      return to_glc(lc, c);
    }
    case ChartId::LeviCivita: {
      if (v[0] == 0 || v[1] == 0) throw DomainError("LC->GLC needs z~_i != 0");
      if (v[3] <= 0 || v[4] <= 0) throw DomainError("LC->GLC: only the u_i > 0 branch is in the atlas");
      const double z1 = A1 * v[0], z2 = A2 * v[1];
      return {z1, z2, v[2], (v[3] * v[3] - 1) / (z1 * z1), (v[4] * v[4] - 1) / (z2 * z2), v[5]};
    }
    case ChartId::RotatedGLC:
      return {v[0] + v[1], v[0] - v[1], v[2], v[3], v[4], v[5]};
    case ChartId::PolarBlowup:
      if (v[0] < 0) throw DomainError("polar chart requires r >= 0");
      return {v[0] * std::cos(v[1]), v[0] * std::sin(v[1]), v[2], v[3], v[4], v[5]};
    case ChartId::DirZ1: {
      const double a = v[0], b = v[0] * v[1];
      return {a + b, a - b, v[2], v[3], v[4], v[5]};
    }
    case ChartId::DirZ2: {
      const double a = v[0] * v[1], b = v[1];
      return {a + b, a - b, v[2], v[3], v[4], v[5]};
    }
    case ChartId::NormalForm:
      throw DomainError("NormalForm chart is reached only through nf_chart_map");
  }
  throw DomainError("unknown chart");
}

V6 from_glc(const V6& g, ChartId target, const DerivedConstants& c) {
  const double A1 = c.A1(), A2 = c.A2();
  const double zr1 = 0.5 * (g[0] + g[1]), zr2 = 0.5 * (g[0] - g[1]);
  switch (target) {
    case ChartId::GeneralisedLC: return g;
    case ChartId::LeviCivita:
      return {g[0] / A1, g[1] / A2, g[2], u_branch(g[3], g[0]), u_branch(g[4], g[1]), g[5]};
    case ChartId::Physical: {
      const V6 lc = from_glc(g, ChartId::LeviCivita, c);
      if (lc[0] == 0 || lc[1] == 0) throw DomainError("LC->Physical needs z~_i != 0");
      return {0.5 * lc[0] * lc[0], 0.5 * lc[1] * lc[1], lc[2], lc[3] / lc[0], lc[4] / lc[1], lc[5]};
    }
    case ChartId::RotatedGLC: return {zr1, zr2, g[2], g[3], g[4], g[5]};
    case ChartId::PolarBlowup:
      return {std::hypot(g[0], g[1]), std::atan2(g[1], g[0]), g[2], g[3], g[4], g[5]};
    case ChartId::DirZ1:
      if (zr1 == 0) throw DomainError("DirZ1 chart needs zr1 != 0");
      return {zr1, zr2 / zr1, g[2], g[3], g[4], g[5]};
    case ChartId::DirZ2:
      if (zr2 == 0) throw DomainError("DirZ2 chart needs zr2 != 0");
      return {zr1 / zr2, zr2, g[2], g[3], g[4], g[5]};
    case ChartId::NormalForm:
      throw DomainError("NormalForm chart is reached only through nf_chart_map");
  }
  throw DomainError("unknown chart");
}

}  // namespace

double clock_factor(ChartId id, const V6& x, const DerivedConstants& c) {
  if (id == ChartId::Physical) return 1;
  if (id == ChartId::NormalForm) return 0;  // not tracked in this chart
  if (id == ChartId::LeviCivita) return x[0] * x[0] * x[1] * x[1];
  ChartState s{id, x, 1};
  const V6 g = to_glc(s, c);
  const double base = g[0] * g[0] * g[1] * g[1];  // dt = z1^2 z2^2 dtau
  switch (id) {
    case ChartId::PolarBlowup: return x[0] == 0 ? 0 : base / x[0];
    case ChartId::DirZ1: return x[0] == 0 ? 0 : base / x[0];
    case ChartId::DirZ2: return x[1] == 0 ? 0 : base / x[1];
    default: return base;
  }
}

ChartState make_state(ChartId id, const V6& x, const DerivedConstants& c) {
  return {id, x, clock_factor(id, x, c)};
}

ChartState chart_transform(const ChartState& s, ChartId target, const DerivedConstants& c) {
  const V6 g = to_glc(s, c);
  const V6 out = from_glc(g, target, c);
  return {target, out, clock_factor(target, out, c)};
}

}  // namespace sbc
