#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbc/constants.hpp"
#include "sbc/poly.hpp"

namespace sbc {

// R~_h(u, 1) = R_h(u + 1, u - 1), coefficients of u^0..u^9 as computed by the
// normal-form engine (equal masses, normalised by b_c a1^{-1/3}).
const std::vector<double>& rtilde_h_coeffs();
Poly rh_from_engine();

// 3^{8/3} int_0^ubar (1 + 3u^2)^{-11/3} R~_h(u, 1) du by adaptive Gauss-Kronrod.
double hbar8(double ubar);
double hbar8_integrand(double u);
// Printed closed form (hypergeometric), used as a cross-check.
double hbar8_closed(double ubar);
// lim_{u -> +inf} (hbar8(u) + 216/95 u^{5/3}); twice this is the Gamma expression.
double hbar8_aplus();

// nu^{8/3} (H8(1/nu) - H8(-1/nu)) + 432/95 nu. Tends to btilde_factor() nu^{8/3}.
double h8_of_nu(double nu);

struct H8Extrapolation {
  std::vector<double> nus, ratios;  // ratios = h8_of_nu / nu^{8/3}
  double limit = 0;                 // fitted L in L + B nu^{1/3}
  double slope = 0;                 // B
  double reference = 0;             // btilde_factor()
  double rel_error() const;
  bool monotone = false;
};
H8Extrapolation extrapolate_h8(const std::vector<double>& nus);

// Coordinates on a transversal section: hyperbolic coordinate then centre.
struct SectionCoords {
  double hyp = 0, x = 1, h1 = 0, h2 = 0, y = 0;
};
nlohmann::json to_json(const SectionCoords& s);

enum class DulacDirection { Incoming, Outgoing };
struct DulacParams {
  int rho_num = 1, rho_den = 3;  // 1/3 (incoming) or 3/1 (outgoing)
  double nu = 0.1;
  DulacDirection direction = DulacDirection::Incoming;
};

struct TruncationInfo {
  std::string order;  // e.g. "O(v^3 ln v)"
};

// Leading-order Dulac maps: rho = 1/3 sends v -> (v/nu)^{1/3}, rho = 3 sends
// u -> nu u^3. Centre coordinates pass through.
SectionCoords dulac_map(const DulacParams& p, const SectionCoords& s, TruncationInfo* info = nullptr);

// T+ at the implemented order.
SectionCoords smooth_transition(double nu, const DerivedConstants& c, const SectionCoords& s);

struct BlockMapPrediction {
  int exponent_num = 8, exponent_den = 3;
  double coeff_h1 = 0;          // btilde_c a1^{-1/3}
  double coeff_h2 = 0;          // -btilde_c a2^{-1/3} (conservation)
  double coeff_h2_printed = 0;  // +btilde_c a2^{-1/3} as displayed in the final limit
  int remainder_num = 3, remainder_den = 1;
  bool remainder_log = true;
};
nlohmann::json to_json(const BlockMapPrediction& p);

BlockMapPrediction block_map_prediction(const DerivedConstants& c);
SectionCoords predicted_block_map(double v, const DerivedConstants& c, const SectionCoords& s,
                                  BlockMapPrediction* pred = nullptr);

// -------------------------------------------------------------- fitting

struct PowerLawFit {
  double exponent = 0, coefficient = 0, r_squared = 0;
  std::vector<double> residuals;  // per point, in log space
  int n = 0;
};
nlohmann::json to_json(const PowerLawFit& f);
// log|y| = log c + e log v, least squares.
PowerLawFit fit_power_law(const std::vector<double>& v, const std::vector<double>& y);

struct SeriesTerm {
  int exp_num = 0, exp_den = 1;
  int log_power = 0;
  std::vector<double> coefficient;  // one per fitted component
};

struct GridCandidate {
  int exp_num = 0, exp_den = 1;
  double residual = 0;  // RMS relative residual of the primary component
  std::vector<SeriesTerm> terms;
};

struct TransitionSeries {
  std::vector<SeriesTerm> terms;  // ascending exponents
  int trunc_num = 3, trunc_den = 1;
  std::vector<std::string> components;
  // model selection diagnostics
  std::vector<GridCandidate> candidates;
  int best = -1;
  double ratio_to_neighbours = 0;  // min residual(7/3, 3) / residual(best), relative to the best grid point
  PowerLawFit free_fit;
};
nlohmann::json to_json(const TransitionSeries& t);

struct QuasiRegularOptions {
  int max_i = 4;             // exponents i + j/3 with 1 <= e <= max_i
  int regular_corrections = 1;  // candidate e also carries v^{e+1}, ..., v^{e+n}
  bool log_term = false;     // add v^3 ln v when the leading exponent is below 3
};

// samples: v and one row of deltas per v (primary component first).
TransitionSeries quasi_regular_fit(const std::vector<double>& v, const std::vector<std::vector<double>>& deltas,
                                   const std::vector<std::string>& names, const QuasiRegularOptions& opt = {});

}  // namespace sbc
