#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbc/constants.hpp"
#include "sbc/integrator.hpp"
#include "sbc/transition.hpp"

namespace sbc {

// Numerical passage through the simultaneous-collision block.
//
// Entry section {zr1 = -delta}, exit section {zr1 = +delta} in rotated GLC
// coordinates zr = ((z1+z2)/2, (z1-z2)/2). The entry state has the offset
// s = kappa~ evaluated in normal-form coordinates. Energy changes are read in
// normal-form coordinates corrected by the exact leading-order h-drift along
// the passage, so that the sections themselves contribute nothing at order
// |kappa~|^{8/3}.
struct BlockMapOptions {
  double delta = 0.2;
  double h1_star = 0.1, h2_star = -0.1, y_star = 0.0;
  bool uncoupled = false;
  bool extended = false;  // long double state and arithmetic
  int nf_weight = 15;
  IntegratorConfig cfg{};
  double tube = 2.0;  // |zr| must stay below tube * max(delta, |zr2| at entry)
  nlohmann::json to_json() const;
};

struct BlockMapRow {
  double s = 0;        // kappa~ offset of the entry state
  double v = 0;        // |kappa~| at entry (normal-form coordinates)
  double v_nf = 0;     // directional coordinate u^{-3} kappa~ from nf_chart_map
  double dh1 = 0, dh2 = 0, dx = 0, dy = 0;  // corrected normal-form deltas (raw GLC when uncoupled)
  double dh1_raw = 0, dh2_raw = 0;          // plain GLC h deltas
  double time_rescaled = 0, time_physical = 0;
  double energy_drift = 0;  // |E(exit) - E(entry)|
  double conserved_drift = 0;  // uncoupled: max |delta h_i|, |delta y|
  long steps = 0;
  std::array<double, 6> entry{}, exit{};  // GLC states
};
nlohmann::json to_json(const BlockMapRow& r);

// Smallest offset for which the tolerance budget still resolves the signal.
double min_offset(const DerivedConstants& c, const BlockMapOptions& o);

BlockMapRow numeric_block_map(double s, const DerivedConstants& c, const BlockMapOptions& o);

// Accepted integration nodes of one passage, in GLC coordinates.
struct PassageSample {
  double tau = 0;
  std::array<double, 6> state{};
  double time_physical = 0;
};
std::vector<PassageSample> passage_trajectory(double s, const DerivedConstants& c, const BlockMapOptions& o);

// GLC entry state on {zr1 = -delta} with kappa~ = s.
std::array<double, 6> entry_state(double s, const DerivedConstants& c, const BlockMapOptions& o);

struct SweepFailure {
  double s = 0;
  std::string error_class, message;
};

struct SweepResult {
  std::vector<BlockMapRow> rows;  // sorted by s
  std::vector<SweepFailure> failures;
  PowerLawFit fit;                // free fit of |dh1| vs v
  TransitionSeries series;        // constrained grid fit of (dh1, dh2)
  double coefficient = 0;         // v^{8/3} coefficient of dh1 from the grid fit
  double coefficient_ratio = 0;   // coefficient / (btilde_c a1^{-1/3})
  double ratio_target = 0;        // -(a2/a1)^{1/3}
  double ratio_max_dev = 0;       // max relative deviation of dh1/dh2 from the target
  bool fitted = false;
  std::string fit_note;
  double max_energy_drift = 0, max_conserved_drift = 0;
};
nlohmann::json to_json(const SweepResult& r);

// Offsets log-spaced so that v = |s| covers [v_lo, v_hi].
std::vector<double> log_offsets(double v_lo, double v_hi, int n);

SweepResult sweep_and_fit(const std::vector<double>& s_values, const DerivedConstants& c,
                          const BlockMapOptions& o, int workers = 1);

// Header: s, v, dh1, dh2, dx, dy, time_rescaled, time_physical
std::string sweep_csv(const SweepResult& r);

struct ContinuityReport {
  std::vector<double> s, gap, gap_raw;
  PowerLawFit fit;  // gap ~ s^e
  bool monotone = false;
  double limit_dev = 0;  // max |exit - entry| of centre variables at the smallest s
  double max_energy_drift = 0;
};
nlohmann::json to_json(const ContinuityReport& r);

// Exit states for +s and -s must approach each other as s -> 0.
ContinuityReport c0_continuity_check(const std::vector<double>& s_values, const DerivedConstants& c,
                                     const BlockMapOptions& o, int workers = 1);

struct KappaDriftReport {
  std::vector<double> amplitude, drift;
  PowerLawFit fit;
};
nlohmann::json to_json(const KappaDriftReport& r);

// Integrates the truncated normal form (long double) from zr = u (-1, 0.3) over
// tau = 0.5/u and records the change of the degree-7 kappa~.
KappaDriftReport kappa_drift(const std::vector<double>& amplitudes, const DerivedConstants& c, int weight = 9,
                             const IntegratorConfig& cfg = {});

}  // namespace sbc
