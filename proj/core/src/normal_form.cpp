#include "sbc/normal_form.hpp"

#include <mutex>

#include "sbc/error.hpp"

namespace sbc {

namespace {

Poly zmono(int a, int b, const Rational& c = 1) { return Poly::monomial({a, b, 0, 0, 0, 0}, c); }

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Poly coefficient_monomial(Poly::Key key) { return Poly::monomial(Poly::unpack(key)); }

}  // namespace

int component_weight(int comp, int zdeg) { return comp < 2 ? zdeg - 1 : zdeg; }
int component_max_zdeg(int comp, int max_weight) { return comp < 2 ? max_weight + 1 : max_weight; }

PolyVec weight_part(const PolyVec& v, int w) {
  PolyVec r;
  for (int i = 0; i < 6; ++i) {
    const int d = i < 2 ? w + 1 : w;
    if (d >= 0) r[i] = v[i].zhomogeneous(d);
  }
  return r;
}

PolyVec truncate_weight(const PolyVec& v, int max_weight) {
  PolyVec r;
  for (int i = 0; i < 6; ++i) r[i] = v[i].truncated(component_max_zdeg(i, max_weight));
  return r;
}

bool is_zero(const PolyVec& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

PolyVec leading_field() {
  PolyVec x0;
  x0[0] = zmono(0, 2);
  x0[1] = zmono(2, 0);
  return x0;
}

Poly apply_derivation(const PolyVec& A, const Poly& g, int max_zdeg) {
  Poly r;
  for (int j = 0; j < 6; ++j) {
    if (A[j].is_zero()) continue;
    const Poly dg = g.derivative(j);
    if (!dg.is_zero()) r += Poly::mul(A[j], dg, max_zdeg);
  }
  return r;
}

PolyVec lie_bracket(const PolyVec& A, const PolyVec& B) {
  PolyVec r;
  for (int i = 0; i < 6; ++i) r[i] = apply_derivation(A, B[i]) - apply_derivation(B, A[i]);
  return r;
}

PolyVec add(const PolyVec& a, const PolyVec& b) {
  PolyVec r;
  for (int i = 0; i < 6; ++i) r[i] = a[i] + b[i];
  return r;
}

PolyVec sub(const PolyVec& a, const PolyVec& b) {
  PolyVec r;
  for (int i = 0; i < 6; ++i) r[i] = a[i] - b[i];
  return r;
}

Poly x0_derivation(const Poly& p) {
  return Poly::mul(zmono(0, 2), p.derivative(Z1)) + Poly::mul(zmono(2, 0), p.derivative(Z2));
}

Poly x0_adjoint(const Poly& p) {
  return Poly::mul(zmono(0, 1), p.derivative(Z1).derivative(Z1)) +
         Poly::mul(zmono(1, 0), p.derivative(Z2).derivative(Z2));
}

PolyVec cohomological_op(const PolyVec& U) { return lie_bracket(leading_field(), U); }

PolyVec adjoint_op(const PolyVec& W) {
  PolyVec r;
  r[0] = x0_adjoint(W[0]) - W[1].derivative(Z1) * Rational(2);
  r[1] = x0_adjoint(W[1]) - W[0].derivative(Z2) * Rational(2);
  for (int i = 2; i < 6; ++i) r[i] = x0_adjoint(W[i]);
  return r;
}

Rational fischer_inner(const Poly& p, const Poly& q) {
  Rational s = 0;
  const auto& tp = p.terms();
  const auto& tq = q.terms();
  for (const auto& [k, c] : tp) {
    auto it = tq.find(k);
    if (it == tq.end()) continue;
    const Exponents e = Poly::unpack(k);
    s += c * it->second * factorial(e[0]) * factorial(e[1]);
  }
  return s;
}

Rational fischer_inner(const PolyVec& p, const PolyVec& q) {
  Rational s = 0;
  for (int i = 0; i < 6; ++i) s += fischer_inner(p[i], q[i]);
  return s;
}

// ---------------------------------------------------------------- blocks

namespace {

std::vector<std::pair<int, int>> make_basis(bool vec, int deg) {
  std::vector<std::pair<int, int>> b;
  for (int c = 0; c < (vec ? 2 : 1); ++c)
    for (int a = 0; a <= deg; ++a) b.emplace_back(c, a);
  return b;
}

Rational basis_weight(const std::pair<int, int>& e, int deg) { return factorial(e.second) * factorial(deg - e.second); }

HomologicalBlock build_block(bool vec, int in_deg) {
  HomologicalBlock b;
  b.vector_block = vec;
  b.in_deg = in_deg;
  b.in_basis = make_basis(vec, in_deg);
  b.out_basis = make_basis(vec, in_deg + 1);
  const int nin = int(b.in_basis.size()), nout = int(b.out_basis.size());
  b.L = RMatrix(nout, nin);
  for (int j = 0; j < nin; ++j) {
    std::vector<Rational> e(nin);
    e[j] = 1;
    auto u = block_polys(b, e, true);
    std::vector<Poly> out;
    if (vec) {
      out.push_back(x0_derivation(u[0]) - Poly::mul(zmono(0, 1), u[1]) * Rational(2));
      out.push_back(x0_derivation(u[1]) - Poly::mul(zmono(1, 0), u[0]) * Rational(2));
    } else {
      out.push_back(x0_derivation(u[0]));
    }
    std::vector<const Poly*> ptr;
    for (auto& p : out) ptr.push_back(&p);
    const auto col = block_vector(b, ptr, false);
    for (int i = 0; i < nout; ++i) b.L(i, j) = col[i];
  }
  // L* = W_in^{-1} L^T W_out
  b.Lstar = b.L.transpose();
  for (int i = 0; i < nin; ++i)
    for (int j = 0; j < nout; ++j)
      b.Lstar(i, j) = b.Lstar(i, j) * basis_weight(b.out_basis[j], in_deg + 1) / basis_weight(b.in_basis[i], in_deg);
  const auto piv = b.Lstar.pivot_columns();
  b.rank = int(piv.size());
  b.G = RMatrix(nin, nout);
  b.P = RMatrix::identity(nout);
  if (b.rank > 0) {
    // minimal-norm solution restricted to Im L*: U = B c, c from the normal
    // equations of min |L B c - T|_W
    const RMatrix B = b.Lstar.select_columns(piv);
    const RMatrix LB = b.L * B;
    RMatrix WLB = LB;
    for (int i = 0; i < nout; ++i)
      for (int j = 0; j < WLB.cols; ++j) WLB(i, j) *= basis_weight(b.out_basis[i], in_deg + 1);
    const RMatrix gram = LB.transpose() * WLB;
    b.G = B * gram.inverse() * WLB.transpose();
    b.P = RMatrix::identity(nout) - b.L * b.G;
  }
  return b;
}

}  // namespace

std::vector<Rational> block_vector(const HomologicalBlock& b, const std::vector<const Poly*>& comps, bool input) {
  const auto& basis = input ? b.in_basis : b.out_basis;
  const int deg = input ? b.in_deg : b.in_deg + 1;
  std::vector<Rational> v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [c, a] = basis[i];
    if (comps[c]) v[i] = comps[c]->coeff({a, deg - a, 0, 0, 0, 0});
  }
  return v;
}

std::vector<Poly> block_polys(const HomologicalBlock& b, const std::vector<Rational>& v, bool input) {
  const auto& basis = input ? b.in_basis : b.out_basis;
  const int deg = input ? b.in_deg : b.in_deg + 1;
  std::vector<Poly> out(b.vector_block ? 2 : 1);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (v[i] != 0) out[basis[i].first].add_term({basis[i].second, deg - basis[i].second, 0, 0, 0, 0}, v[i]);
  return out;
}

const HomologicalBlock& homological_block(bool vector_block, int in_deg) {
  static std::mutex mu;
  static std::map<std::pair<bool, int>, HomologicalBlock> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(vector_block, in_deg);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_block(vector_block, in_deg)).first;
  return it->second;
}

GradedSplit graded_split(int d) {
  GradedSplit g;
  g.weight = d + 1;
  const auto& bz = homological_block(true, d + 1);
  const auto& bp = homological_block(false, d);
  auto fill = [](const HomologicalBlock& b, RMatrix& im, RMatrix& ker) {
    im = b.L.select_columns(b.L.pivot_columns());
    ker = b.Lstar.nullspace();
  };
  fill(bz, g.image_basis_z, g.kernel_basis_z);
  fill(bp, g.image_basis_p, g.kernel_basis_p);
  g.dim_total_z = int(bz.out_basis.size());
  g.dim_image_z = g.image_basis_z.cols;
  g.dim_kernel_z = g.kernel_basis_z.cols;
  g.dim_total_p = int(bp.out_basis.size());
  g.dim_image_p = g.image_basis_p.cols;
  g.dim_kernel_p = g.kernel_basis_p.cols;
  auto orth = [](const HomologicalBlock& b, const RMatrix& im, const RMatrix& ker) {
    for (int i = 0; i < im.cols; ++i)
      for (int j = 0; j < ker.cols; ++j) {
        Rational s = 0;
        for (int r = 0; r < im.rows; ++r) s += im(r, i) * ker(r, j) * basis_weight(b.out_basis[r], b.in_deg + 1);
        if (s != 0) return false;
      }
    return true;
  };
  g.orthogonal = orth(bz, g.image_basis_z, g.kernel_basis_z) && orth(bp, g.image_basis_p, g.kernel_basis_p);
  return g;
}

// ---------------------------------------------------------------- field

Poly potential_series_four_term(const std::array<Rational, 4>& d, const std::array<Rational, 4>& alpha,
                                const std::array<Rational, 4>& beta, int max_zdeg) {
  Poly K;
  for (int j = 0; j < 4; ++j) {
    const Poly q = zmono(2, 0, alpha[j]) + zmono(0, 2, beta[j]);
    Poly qn(1);
    for (int n = 0; 2 * n <= max_zdeg; ++n) {
      K += Poly::mul(qn, Poly::monomial({0, 0, -(n + 1), 0, 0, 0}, (n % 2 ? -1 : 1) * d[j]));
      qn = Poly::mul(qn, q);
    }
  }
  return K;
}

Poly potential_series(const DerivedConstants& c, int max_zdeg) {
  Poly K;
  auto xm = [](int a, int b, int xe, const Rational& v) { return Poly::monomial({a, b, xe, 0, 0, 0}, v); };
  K += xm(0, 0, -1, best_rational(c.b0));
  const double b1[3] = {c.b12, c.b13, c.b14}, b2[3] = {c.b22, c.b23, c.b24};
  for (int j = 2; j <= 4; ++j) {
    if (2 * j > max_zdeg) break;
    K += xm(2 * j, 0, -(j + 1), best_rational(b1[j - 2]));
    K += xm(0, 2 * j, -(j + 1), best_rational(b2[j - 2]));
  }
  if (max_zdeg >= 8) K += xm(4, 4, -5, best_rational(c.bc));
  if (max_zdeg > 8) {
    std::array<Rational, 4> d, al, be;
    int i = 0;
    for (auto t : std::array<std::array<double, 3>, 4>{{{c.d1, c.C2, -c.C4}, {c.d2, c.C2, c.C3},
                                                         {c.d3, -c.C1, -c.C4}, {c.d4, -c.C1, c.C3}}}) {
      d[i] = best_rational(t[0]);
      al[i] = best_rational(t[1]);
      be[i] = best_rational(t[2]);
      ++i;
    }
    const Poly full = potential_series_four_term(d, al, be, max_zdeg);
    for (const auto& [k, v] : full.terms())
      if (Poly::zdeg_of(k) > 8) K.add_term_key(k, v);
  }
  return K;
}

NormalFormParams nf_params(const DerivedConstants& c, int max_weight) {
  NormalFormParams p;
  p.mu = best_rational(c.mu);
  p.A1 = best_rational(c.A1());
  p.A2 = best_rational(c.A2());
  p.max_weight = max_weight;
  p.K = potential_series(c, max_weight - 1);
  return p;
}

PolyVec taylor_field(const NormalFormParams& p) {
  const int W = p.max_weight;
  if (W < 4) throw PreconditionError("taylor_field: max weight must be >= 4");
  auto sqrt_series = [&](int slot_h, int slot_z) {
    Poly s;
    for (int k = 0; 2 * k <= W - 1; ++k) {
      Exponents e{};
      e[slot_h] = k;
      e[slot_z] = 2 * k;
      s.add_term(e, binomial(Rational(1, 2), k));
    }
    return s;
  };
  const Poly S1 = sqrt_series(H1, Z1), S2 = sqrt_series(H2, Z2);
  const Poly q1 = zmono(2, 0), q2 = zmono(0, 2), q12 = zmono(2, 2);
  PolyVec X;
  X[0] = Poly::mul(q2, S1, W + 1);
  X[1] = Poly::mul(q1, S2, W + 1);
  X[2] = Poly::monomial({2, 2, 0, 0, 0, 1}, p.mu);
  X[3] = Poly::mul(Poly::mul(q2, S1, W), p.K.derivative(Z1), W) * (2 * p.A1);
  X[4] = Poly::mul(Poly::mul(q1, S2, W), p.K.derivative(Z2), W) * (2 * p.A2);
  X[5] = Poly::mul(q12, p.K.derivative(Var::X), W);
  return truncate_weight(X, W);
}

// ---------------------------------------------------------------- transforms

namespace {
std::array<Poly, 6> shifted_vars(const PolyVec& U) {
  std::array<Poly, 6> s;
  for (int v = 0; v < 6; ++v) s[v] = Poly::var(v) + U[v];
  return s;
}
std::array<const Poly*, 6> ptrs(const std::array<Poly, 6>& s, const PolyVec& U) {
  std::array<const Poly*, 6> p{};
  for (int v = 0; v < 6; ++v) p[v] = U[v].is_zero() ? nullptr : &s[v];
  return p;
}
}  // namespace

PolyVec compose_map(const PolyVec& T, const PolyVec& U, int max_weight) {
  const auto s = shifted_vars(U);
  const auto p = ptrs(s, U);
  PolyVec r;
  for (int i = 0; i < 6; ++i) r[i] = T[i].substitute(p, component_max_zdeg(i, max_weight));
  return r;
}

PolyVec pullback(const PolyVec& X, const PolyVec& U, int max_weight) {
  const PolyVec Xs = compose_map(X, U, max_weight);
  std::array<std::array<Poly, 6>, 6> DU;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) DU[i][j] = U[i].derivative(j);
  PolyVec Y = Xs;
  for (int it = 0; it <= max_weight + 1; ++it) {
    PolyVec next = Xs;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (!DU[i][j].is_zero() && !Y[j].is_zero())
          next[i] -= Poly::mul(DU[i][j], Y[j], component_max_zdeg(i, max_weight));
    if (next == Y) return Y;
    Y = std::move(next);
  }
  throw InvariantError("pullback: fixed-point iteration did not terminate");
}

NormalFormResult normal_form(const PolyVec& Xin, int max_weight) {
  NormalFormResult res;
  res.max_weight = max_weight;
  PolyVec Y = truncate_weight(Xin, max_weight);
  // leading part must be X0, nothing of weight <= 0
  for (int i = 0; i < 6; ++i)
    if (Y[i].min_zdeg() >= 0 && component_weight(i, Y[i].min_zdeg()) < 1)
      throw PreconditionError("normal_form: field has terms of weight <= 0");
  if (!(weight_part(Y, 1) == leading_field()))
    throw PreconditionError("normal_form: leading part is not X0 = (z2^2, z1^2, 0, 0, 0, 0)");
  for (int i = 0; i < 6; ++i) res.transform[i] = Poly::var(i);

  for (int k = 2; k <= max_weight; ++k) {
    const PolyVec T = weight_part(Y, k);
    if (is_zero(T)) continue;
    PolyVec N, U;
    // vector block on the z-components
    {
      const auto& b = homological_block(true, k);
      const auto s0 = T[0].split_by_coefficient(), s1 = T[1].split_by_coefficient();
      std::map<Poly::Key, std::pair<const Poly*, const Poly*>> keys;
      for (const auto& [key, p] : s0) keys[key].first = &p;
      for (const auto& [key, p] : s1) keys[key].second = &p;
      for (const auto& [key, pr] : keys) {
        const auto t = block_vector(b, {pr.first, pr.second}, false);
        const auto n = block_polys(b, b.P.apply(t), false);
        const auto u = block_polys(b, b.G.apply(t), true);
        const Poly cm = coefficient_monomial(key);
        for (int c = 0; c < 2; ++c) {
          N[c] += Poly::mul(n[c], cm);
          U[c] += Poly::mul(u[c], cm);
        }
      }
    }
    // scalar blocks on x, H1, H2, y
    {
      const auto& b = homological_block(false, k - 1);
      for (int i = 2; i < 6; ++i)
        for (const auto& [key, p] : T[i].split_by_coefficient()) {
          const auto t = block_vector(b, {&p}, false);
          const Poly cm = coefficient_monomial(key);
          N[i] += Poly::mul(block_polys(b, b.P.apply(t), false)[0], cm);
          U[i] += Poly::mul(block_polys(b, b.G.apply(t), true)[0], cm);
        }
    }
    // consistency of the homological equation: L U + N = T
    const PolyVec LU = cohomological_op(U);
    if (!(add(LU, N) == T)) throw InvariantError("normal_form: homological equation not satisfied");
    if (!(adjoint_op(N) == PolyVec{})) throw InvariantError("normal_form: resonant part not in ker L*");
    if (is_zero(U)) continue;
    // x = xi + U(xi): pull back, then the weight-k part must equal N
    Y = pullback(Y, U, max_weight);
    if (!(weight_part(Y, k) == N)) throw InvariantError("normal_form: pullback did not produce N at weight k");
    res.generators[k] = U;
    res.transform = compose_map(res.transform, U, max_weight);
  }
  res.normal_form = Y;
  return res;
}

bool verify_conjugacy(const PolyVec& Xin, const NormalFormResult& r) {
  const int W = r.max_weight;
  const PolyVec X = truncate_weight(Xin, W);
  std::array<const Poly*, 6> p{};
  for (int v = 0; v < 6; ++v) p[v] = &r.transform[v];
  for (int i = 0; i < 6; ++i) {
    const int mz = component_max_zdeg(i, W);
    const Poly lhs = X[i].substitute(p, mz);
    Poly rhs;
    for (int j = 0; j < 6; ++j) rhs += Poly::mul(r.transform[i].derivative(j), r.normal_form[j], mz);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

Poly kappa_integral(const PolyVec& N, int max_weight) {
  Poly kappa = zmono(3, 0, Rational(1, 6)) + zmono(0, 3, Rational(-1, 6));
  for (int d = 4; d <= max_weight - 1; ++d) {
    const Poly r = apply_derivation(N, kappa, d + 1).zhomogeneous(d + 1);
    if (r.is_zero()) continue;
    const auto& b = homological_block(false, d);
    for (const auto& [key, p] : (-r).split_by_coefficient()) {
      const auto t = block_vector(b, {&p}, false);
      const auto res = b.P.apply(t);
      for (const auto& v : res)
        if (v != 0) throw InvariantError("kappa_integral: obstruction at degree " + std::to_string(d + 1));
      kappa += Poly::mul(block_polys(b, b.G.apply(t), true)[0], coefficient_monomial(key));
    }
  }
  return kappa;
}

Poly specialize_x(const Poly& p, const Rational& x) {
  Poly r;
  for (const auto& [k, c] : p.terms()) {
    Exponents e = Poly::unpack(k);
    Rational f = c;
    for (int i = 0; i < std::abs(e[X]); ++i) f = e[X] > 0 ? Rational(f * x) : Rational(f / x);
    e[X] = 0;
    r.add_term(e, f);
  }
  return r;
}

Poly coefficient_in_h(const Poly& p, int i, int j) {
  Poly r;
  for (const auto& [k, c] : p.terms()) {
    Exponents e = Poly::unpack(k);
    if (e[H1] != i || e[H2] != j) continue;
    e[H1] = e[H2] = 0;
    r.add_term(e, c);
  }
  return r;
}

Poly swap_z(const Poly& p) {
  Poly r;
  for (const auto& [k, c] : p.terms()) {
    Exponents e = Poly::unpack(k);
    std::swap(e[0], e[1]);
    r.add_term(e, c);
  }
  return r;
}

Poly rotate_pi4_scalar(const Poly& p) {
  const Poly s1 = Poly::var(Z1) + Poly::var(Z2), s2 = Poly::var(Z1) - Poly::var(Z2);
  return p.substitute({&s1, &s2, nullptr, nullptr, nullptr, nullptr}, -1);
}

PolyVec rotate_pi4(const PolyVec& Xv) {
  PolyVec r;
  PolyVec s;
  for (int i = 0; i < 6; ++i) s[i] = rotate_pi4_scalar(Xv[i]);
  r[0] = (s[0] + s[1]) * Rational(1, 2);
  r[1] = (s[0] - s[1]) * Rational(1, 2);
  for (int i = 2; i < 6; ++i) r[i] = s[i];
  return r;
}

bool NoFoliationReport::passed() const {
  return rh_in_kernel_of_adjoint && rh_residual_norm2 > 0 && rh_residual_norm2 == rh_norm2 &&
         kernel_dim_deg4 == 0 && kernel_dim_deg3 == 1 && deg3_kernel_is_kappa_hat;
}

NoFoliationReport verify_no_foliation(const Poly& Rh) {
  NoFoliationReport rep;
  rep.rh_in_kernel_of_adjoint = x0_adjoint(Rh).is_zero();
  const auto& b = homological_block(false, 8);
  const auto t = block_vector(b, {&Rh}, false);
  const auto kerpart = b.P.apply(t);
  std::vector<Rational> impart(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) impart[i] = t[i] - kerpart[i];
  const Poly pk = block_polys(b, kerpart, false)[0], pi = block_polys(b, impart, false)[0];
  rep.rh_norm2 = fischer_inner(Rh, Rh);
  rep.rh_image_projection_norm2 = fischer_inner(pi, pi);
  rep.rh_residual_norm2 = fischer_inner(pk, pk);
  const auto& b4 = homological_block(false, 4);
  rep.kernel_dim_deg4 = b4.L.nullspace().cols;
  const auto& b3 = homological_block(false, 3);
  const RMatrix k3 = b3.L.nullspace();
  rep.kernel_dim_deg3 = k3.cols;
  if (k3.cols == 1) {
    const Poly v = block_polys(b3, std::vector<Rational>(k3.a.begin(), k3.a.end()), true)[0];
    const Poly kh = zmono(3, 0) - zmono(0, 3);
    const Rational s = v.coeff({3, 0, 0, 0, 0, 0});
    rep.deg3_kernel_is_kappa_hat = s != 0 && v * Rational(1 / s) == kh;
  }
  return rep;
}

Poly printed_R61() {
  // (8/7195)(-3 z1 z2^2 (20 z1^3 - 13 z2^3))
  return (zmono(4, 2, -60) + zmono(1, 5, 39)) * Rational(8, 7195);
}

Poly printed_R62() {
  return (zmono(6, 0, 11) + zmono(3, 3, 10) + zmono(0, 6, -10)) * Rational(8, 7195);
}

Poly printed_Rh() {
  const Poly a = zmono(1, 0) - zmono(0, 1);
  const Poly b = zmono(2, 0) + zmono(1, 1) + zmono(0, 2);
  const Poly c = zmono(6, 0) + zmono(3, 3, -11) + zmono(0, 6);
  return (a * b * c) * Rational(4, 19);
}

Poly printed_kappa7() {
  return (zmono(7, 0, 485) + zmono(4, 3, -665) + zmono(1, 6, 308)) * Rational(1, 50365);
}

}  // namespace sbc
