#include "doctest.h"

#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "sbc/error.hpp"

using namespace sbc;
using namespace sbc::cli;
using nlohmann::json;

TEST_CASE("config: defaults and a full round trip") {
  ExperimentConfig d;
  CHECK(d.offset_values().size() == 10);
  CHECK(d.offset_values().front() == doctest::Approx(1e-3));
  const auto back = parse_config(d.to_json());
  CHECK(back.to_json() == d.to_json());
}

TEST_CASE("config: unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config(json{{"delt", 0.2}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"integrator", {{"tol", 1e-12}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"offsets", {{"lo", 1e-3}, {"step", 2}}}}), ConfigError);
}

TEST_CASE("config: types and ranges") {
  CHECK_THROWS_AS(parse_config(json{{"masses", {1, 2, 3}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"masses", {1, 2, 3, -4}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"delta", "0.2"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"delta", 0.1}}), ConfigError);  // h_star outside the ball
  CHECK_THROWS_AS(parse_config(json{{"seed", 1.5}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"integrator", {{"method_order", 6}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"offsets", json::array()}}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config: explicit offsets and ranges") {
  const auto c = parse_config(json{{"offsets", {0.01, 0.02}}, {"masses", {1, 2, 3, 4}}});
  CHECK(c.offset_values() == std::vector<double>{0.01, 0.02});
  CHECK(c.masses.m4 == 4);
  const auto r = parse_config(json{{"offsets", {{"lo", 2e-3}, {"hi", 2e-2}, {"n", 5}}}});
  CHECK(r.offset_values().size() == 5);
  const auto o = parse_config(json{{"delta", 0.1}, {"h_star", {0.05, -0.05}}}).block_map_options();
  CHECK(o.delta == 0.1);
  CHECK(o.h2_star == -0.05);
}

TEST_CASE("constants command writes JSON") {
  ExperimentConfig c;
  c.outputs = "cli_test_out";
  std::ostringstream out;
  CHECK(cmd_constants(c, {}, out).error_class.empty());
  CHECK(json::parse(out.str()).at("bc").get<double>() == 3.0 / 32);
}

TEST_CASE("verify command: list and fault injection") {
  ExperimentConfig c;
  c.outputs = "cli_test_out";
  Flags f;
  f.list = true;
  std::ostringstream out;
  cmd_verify(c, f, out);
  CHECK(out.str().find("kernels") != std::string::npos);
  Flags g;
  g.checks = {"kernels"};
  g.faults = {"rh-coefficient"};
  std::ostringstream o2;
  CHECK(cmd_verify(c, g, o2).error_class == "verification_failed");
}

TEST_CASE("one_line flattens messages") { CHECK(one_line("a\nb\rc") == "a b c"); }
