#pragma once

#include <map>
#include <vector>

#include "sbc/constants.hpp"
#include "sbc/poly.hpp"
#include "sbc/rmatrix.hpp"

namespace sbc {

// Grading used throughout the engine: a term in a z-component (slots 0,1) of
// z-degree n has weight n-1, a term in any other component has weight n. The
// leading field X0 = (z2^2, z1^2, 0, 0, 0, 0) has weight 1 and [X0, .] raises
// weight by one. Coefficients live in Q[x, 1/x, H1, H2, y].
int component_weight(int comp, int zdeg);
int component_max_zdeg(int comp, int max_weight);
PolyVec weight_part(const PolyVec& v, int w);
PolyVec truncate_weight(const PolyVec& v, int max_weight);
bool is_zero(const PolyVec& v);

PolyVec leading_field();

// A(g) = sum_j A^j d_j g
Poly apply_derivation(const PolyVec& A, const Poly& g, int max_zdeg = -1);
// [A,B]^i = A(B^i) - B(A^i)
PolyVec lie_bracket(const PolyVec& A, const PolyVec& B);
PolyVec add(const PolyVec& a, const PolyVec& b);
PolyVec sub(const PolyVec& a, const PolyVec& b);

Poly x0_derivation(const Poly& p);  // z2^2 d1 + z1^2 d2
Poly x0_adjoint(const Poly& p);     // z2 d1^2 + z1 d2^2
PolyVec cohomological_op(const PolyVec& U);  // [X0, U]
PolyVec adjoint_op(const PolyVec& W);        // printed L*

// <z^a c, z^b c'> = a! delta over z-slots, distinct coefficient monomials orthogonal
Rational fischer_inner(const Poly& p, const Poly& q);
Rational fischer_inner(const PolyVec& p, const PolyVec& q);

// Matrix form of one block of the cohomological operator on z-homogeneous
// polynomials. The vector block acts on (U1, U2) of degree in_deg; the scalar
// block is X0~ acting on a single degree in_deg polynomial.
struct HomologicalBlock {
  bool vector_block = false;
  int in_deg = 0;
  std::vector<std::pair<int, int>> in_basis, out_basis;  // (component, z1 exponent)
  RMatrix L, Lstar, G, P;  // G: minimal-norm solver, P: projection on ker L*
  int rank = 0;
  int kernel_dim() const { return int(out_basis.size()) - rank; }
  int out_deg() const { return vector_block ? in_deg + 1 : in_deg + 1; }
};
const HomologicalBlock& homological_block(bool vector_block, int in_deg);

std::vector<Rational> block_vector(const HomologicalBlock& b, const std::vector<const Poly*>& comps, bool input);
std::vector<Poly> block_polys(const HomologicalBlock& b, const std::vector<Rational>& v, bool input);

struct GradedSplit {
  int weight = 0;       // output weight d+1
  int dim_total_z = 0, dim_image_z = 0, dim_kernel_z = 0;
  int dim_total_p = 0, dim_image_p = 0, dim_kernel_p = 0;
  RMatrix image_basis_z, kernel_basis_z, image_basis_p, kernel_basis_p;
  bool orthogonal = false;
};
// Decomposition of the weight d+1 space into Im L_d (+) ker L*.
GradedSplit graded_split(int d);

// Potential series through z-degree max_zdeg. The degree <= 8 part uses the
// b-coefficients (exact sparsity); higher degrees come from the four-term sum.
Poly potential_series(const DerivedConstants& c, int max_zdeg = 8);
// Expansion of sum d_j/(x + alpha_j z1^2 + beta_j z2^2) with exact inputs.
Poly potential_series_four_term(const std::array<Rational, 4>& d, const std::array<Rational, 4>& alpha,
                                const std::array<Rational, 4>& beta, int max_zdeg);

struct NormalFormParams {
  Rational mu, A1, A2;
  Poly K;  // potential series in (z1, z2, x)
  int max_weight = 9;
};
NormalFormParams nf_params(const DerivedConstants& c, int max_weight = 9);

// Taylor field of vf_glc about z = 0, exact in (x, H1, H2, y).
PolyVec taylor_field(const NormalFormParams& p);

struct NormalFormResult {
  PolyVec normal_form;
  PolyVec transform;                // original = transform(normal-form coordinates)
  std::map<int, PolyVec> generators;  // U_k by weight k-1, keyed by k
  int max_weight = 0;
  bool certified = false;
};

// Pull X back through xi -> xi + U: (I + DU)^{-1} X(xi + U), truncated.
PolyVec pullback(const PolyVec& X, const PolyVec& U, int max_weight);
PolyVec compose_map(const PolyVec& T, const PolyVec& U, int max_weight);  // T(xi + U(xi))

NormalFormResult normal_form(const PolyVec& X, int max_weight);
// X(T(xi)) == DT(xi) N(xi) through max_weight, exactly.
bool verify_conjugacy(const PolyVec& X, const NormalFormResult& r);

// Approximate integral extending (z1^3 - z2^3)/6 through z-degree max_weight-2
// for the normal form N (X(kappa) has no terms of degree <= max_weight).
Poly kappa_integral(const PolyVec& N, int max_weight);

// x -> value in slot X
Poly specialize_x(const Poly& p, const Rational& x);
// coefficient of H1^i H2^j (x, y exponents kept)
Poly coefficient_in_h(const Poly& p, int i, int j);
// swap z1 <-> z2
Poly swap_z(const Poly& p);

// (z1, z2) = (zr1 + zr2, zr1 - zr2), field components transformed accordingly.
PolyVec rotate_pi4(const PolyVec& X);
Poly rotate_pi4_scalar(const Poly& p);

struct NoFoliationReport {
  bool rh_in_kernel_of_adjoint = false;
  Rational rh_norm2, rh_image_projection_norm2, rh_residual_norm2;
  int kernel_dim_deg4 = -1;  // ker X0~ on degree-4 scalars
  int kernel_dim_deg3 = -1;
  bool deg3_kernel_is_kappa_hat = false;
  bool passed() const;
};
NoFoliationReport verify_no_foliation(const Poly& Rh);

// The printed polynomials, for comparison.
Poly printed_R61();
Poly printed_R62();
Poly printed_Rh();
Poly printed_kappa7();

}  // namespace sbc
