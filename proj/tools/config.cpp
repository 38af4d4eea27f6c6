#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "sbc/error.hpp"

namespace sbc::cli {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

double num(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.get<long>();
}

bool boolean(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return j.get<bool>();
}

template <std::size_t N>
std::array<double, N> numbers(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != N) throw ConfigError("'" + key + "' must be an array of " + std::to_string(N) + " numbers");
  std::array<double, N> a;
  for (std::size_t i = 0; i < N; ++i) a[i] = num(j[i], key);
  return a;
}

}  // namespace

std::vector<double> ExperimentConfig::offset_values() const {
  if (!offsets.empty()) return offsets;
  return log_offsets(offset_lo, offset_hi, offset_n);
}

BlockMapOptions ExperimentConfig::block_map_options() const {
  BlockMapOptions o;
  o.delta = delta;
  o.h1_star = h_star[0];
  o.h2_star = h_star[1];
  o.y_star = y_star;
  o.uncoupled = uncoupled;
  o.extended = extended_precision;
  o.nf_weight = nf_weight;
  o.cfg = integrator;
  return o;
}

int ExperimentConfig::resolved_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

json ExperimentConfig::to_json() const {
  json j;
  j["masses"] = {masses.m1, masses.m2, masses.m3, masses.m4};
  j["delta"] = delta;
  j["h_star"] = h_star;
  j["y_star"] = y_star;
  if (!offsets.empty())
    j["offsets"] = offsets;
  else
    j["offsets"] = {{"lo", offset_lo}, {"hi", offset_hi}, {"n", offset_n}};
  j["integrator"] = {{"abs_tol", integrator.abs_tol},     {"rel_tol", integrator.rel_tol},
                     {"max_step", integrator.max_step},   {"min_step", integrator.min_step},
                     {"max_steps", integrator.max_steps}, {"method_order", integrator.method_order}};
  j["outputs"] = outputs;
  j["seed"] = seed;
  j["nf_weight"] = nf_weight;
  j["max_degree"] = max_degree;
  j["uncoupled"] = uncoupled;
  j["extended_precision"] = extended_precision;
  j["exponent_band"] = exponent_band;
  j["simulate_offset"] = simulate_offset;
  // workers is left out on purpose: it must not change any output
  return j;
}

void ExperimentConfig::validate() const {
  for (double m : {masses.m1, masses.m2, masses.m3, masses.m4})
    if (!(m > 0) || !std::isfinite(m)) throw ConfigError("masses must be positive and finite");
  if (!(delta > 0 && delta <= 1)) throw ConfigError("delta must lie in (0, 1]");
  if (std::fabs(h_star[0]) >= delta || std::fabs(h_star[1]) >= delta || std::fabs(y_star) >= delta)
    throw ConfigError("h_star and y_star must lie inside the ball of radius delta");
  if (offsets.empty()) {
    if (!(offset_lo > 0 && offset_hi > offset_lo)) throw ConfigError("offsets: need 0 < lo < hi");
    if (offset_n < 2) throw ConfigError("offsets: need n >= 2");
  }
  for (double s : offsets)
    if (s == 0 || !std::isfinite(s)) throw ConfigError("offsets must be nonzero and finite");
  try {
    integrator.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (nf_weight < 9 || nf_weight > 19) throw ConfigError("nf_weight must lie in [9, 19]");
  if (max_degree < 2 || max_degree > 19) throw ConfigError("max_degree must lie in [2, 19]");
  if (!(exponent_band[0] < exponent_band[1])) throw ConfigError("exponent_band must be increasing");
  if (!(simulate_offset != 0 && std::isfinite(simulate_offset))) throw ConfigError("simulate_offset must be nonzero");
}

ExperimentConfig parse_config(const json& j, ExperimentConfig c) {
  reject_unknown(j,
                 {"masses", "delta", "h_star", "y_star", "offsets", "integrator", "outputs", "seed", "workers",
                  "nf_weight", "max_degree", "uncoupled", "extended_precision", "exponent_band", "simulate_offset"},
                 "config");
  if (j.contains("masses")) {
    const auto m = numbers<4>(j["masses"], "masses");
    c.masses = {m[0], m[1], m[2], m[3]};
  }
  if (j.contains("delta")) c.delta = num(j["delta"], "delta");
  if (j.contains("h_star")) c.h_star = numbers<2>(j["h_star"], "h_star");
  if (j.contains("y_star")) c.y_star = num(j["y_star"], "y_star");
  if (j.contains("offsets")) {
    const auto& o = j["offsets"];
    if (o.is_array()) {
      c.offsets.clear();
      for (const auto& v : o) c.offsets.push_back(num(v, "offsets"));
      if (c.offsets.empty()) throw ConfigError("'offsets' must not be empty");
    } else {
      reject_unknown(o, {"lo", "hi", "n"}, "offsets");
      c.offsets.clear();
      if (o.contains("lo")) c.offset_lo = num(o["lo"], "offsets.lo");
      if (o.contains("hi")) c.offset_hi = num(o["hi"], "offsets.hi");
      if (o.contains("n")) c.offset_n = int(integer(o["n"], "offsets.n"));
    }
  }
  if (j.contains("integrator")) {
    const auto& g = j["integrator"];
    reject_unknown(g, {"abs_tol", "rel_tol", "max_step", "min_step", "max_steps", "method_order"}, "integrator");
    if (g.contains("abs_tol")) c.integrator.abs_tol = num(g["abs_tol"], "integrator.abs_tol");
    if (g.contains("rel_tol")) c.integrator.rel_tol = num(g["rel_tol"], "integrator.rel_tol");
    if (g.contains("max_step")) c.integrator.max_step = num(g["max_step"], "integrator.max_step");
    if (g.contains("min_step")) c.integrator.min_step = num(g["min_step"], "integrator.min_step");
    if (g.contains("max_steps")) c.integrator.max_steps = integer(g["max_steps"], "integrator.max_steps");
    if (g.contains("method_order")) c.integrator.method_order = int(integer(g["method_order"], "integrator.method_order"));
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_string()) throw ConfigError("'outputs' must be a string");
    c.outputs = j["outputs"].get<std::string>();
  }
  if (j.contains("seed")) {
    const long s = integer(j["seed"], "seed");
    if (s < 0) throw ConfigError("'seed' must be non-negative");
    c.seed = std::uint64_t(s);
  }
  if (j.contains("workers")) c.workers = int(integer(j["workers"], "workers"));
  if (j.contains("nf_weight")) c.nf_weight = int(integer(j["nf_weight"], "nf_weight"));
  if (j.contains("max_degree")) c.max_degree = int(integer(j["max_degree"], "max_degree"));
  if (j.contains("uncoupled")) c.uncoupled = boolean(j["uncoupled"], "uncoupled");
  if (j.contains("extended_precision")) c.extended_precision = boolean(j["extended_precision"], "extended_precision");
  if (j.contains("exponent_band")) c.exponent_band = numbers<2>(j["exponent_band"], "exponent_band");
  if (j.contains("simulate_offset")) c.simulate_offset = num(j["simulate_offset"], "simulate_offset");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
  return parse_config(j, base);
}

}  // namespace sbc::cli
