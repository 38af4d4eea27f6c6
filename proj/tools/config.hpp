#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbc/blockmap.hpp"
#include "sbc/constants.hpp"
#include "sbc/integrator.hpp"

namespace sbc::cli {

// Everything a run depends on. Defaults reproduce the headline sweep.
struct ExperimentConfig {
  MassParams masses{};
  double delta = 0.2;
  std::array<double, 2> h_star{0.1, -0.1};
  double y_star = 0;
  std::vector<double> offsets;  // explicit list wins over the range
  double offset_lo = 1e-3, offset_hi = 3e-2;
  int offset_n = 10;
  IntegratorConfig integrator{};
  std::string outputs = "sbc-out";
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
  int nf_weight = 15;
  int max_degree = 9;
  bool uncoupled = false;
  bool extended_precision = false;
  std::array<double, 2> exponent_band{2.63, 2.71};
  double simulate_offset = 1e-2;

  std::vector<double> offset_values() const;
  BlockMapOptions block_map_options() const;
  int resolved_workers() const;
  nlohmann::json to_json() const;
  void validate() const;
};

// Strict parse: unknown keys and wrong types are config_error.
ExperimentConfig parse_config(const nlohmann::json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace sbc::cli
