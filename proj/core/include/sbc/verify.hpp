#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbc/constants.hpp"
#include "sbc/normal_form.hpp"

namespace sbc {

// What the normal-form command reports for one mass vector.
struct NormalFormReport {
  int max_weight = 9;
  bool certified = false;
  Poly R61, R62;          // H1^2 and H2^2 coefficients of z1' at x = 1
  Poly Rh;                // weight-9 part of h1' at x = 1, scaled to the printed normalisation
  double rh_scale = 0;    // the factor removed from Rh; equals b_c a1^{-1/3}
  double rh_scale_h2 = 0; // same for h2' against Rh(z2, z1)
  Poly kappa, kappa7;     // full integral and its H1^2 coefficient
  bool R61_matches = false, R62_matches = false, Rh_matches = false, kappa7_matches = false;
  bool x_y_flat = false;  // x' = y' = 0 in the normal form
  bool h_combination_zero = false;  // a2^{-1/3} h1' + a1^{-1/3} h2' = 0
  int lowest_h_resonance = -1;      // z-degree of the first h-term, -1 if none
  PolyVec normal_form;
  double seconds = 0;
};
NormalFormReport normal_form_report(const DerivedConstants& c, int max_weight = 9);
nlohmann::json to_json(const NormalFormReport& r);

// ------------------------------------------------------------ verify battery

struct CheckContext {
  std::uint64_t seed = 1;
  std::vector<std::string> faults;  // injected faults by name
  bool has_fault(const std::string& f) const;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  nlohmann::json detail;
  double seconds = 0;
};

struct CheckSpec {
  std::string name;
  std::string anchor;  // which identity of the theory it tests
  std::function<CheckResult(const CheckContext&)> run;
};

const std::vector<CheckSpec>& check_registry();
// Fault names accepted by CheckContext::faults.
const std::vector<std::pair<std::string, std::string>>& fault_registry();

std::vector<CheckResult> run_checks(const CheckContext& ctx, const std::vector<std::string>& only = {});

// Kernel certificates for a candidate h-resonance (the printed one by default).
struct KernelCertificate {
  bool adjoint_annihilates = false;  // X0* R = 0
  int deg9_kernel_dim = -1;          // scalar kernel of X0* in degree 9
  bool residual_nonzero = false;     // R has a component orthogonal to Im X0
  bool deg3_kernel_is_kappa_hat = false;
  bool passed() const;
};
KernelCertificate kernel_certificate(const Poly& Rh);

}  // namespace sbc
