#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "sbc/error.hpp"

using namespace sbc::cli;

namespace {

int report(const std::string& cls, const std::string& msg, int code) {
  std::cerr << "error " << cls << ": " << one_line(msg) << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous binary collisions in the collinear four-body problem"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out;
  int workers = 0, max_degree = 0;
  std::uint64_t seed = 0;
  bool uncoupled = false, extended = false;
  Flags flags;

  auto* o_config = app.add_option("--config", config_path, "JSON experiment config")->envname("SBC_CONFIG");
  auto* o_out = app.add_option("--out", out, "output directory")->envname("SBC_OUT");
  auto* o_workers = app.add_option("--workers", workers, "parallel workers (0: all cores)")->envname("SBC_WORKERS");
  auto* o_seed = app.add_option("--seed", seed, "seed of the randomised checks")->envname("SBC_SEED");
  auto* o_deg = app.add_option("--max-degree", max_degree, "normal-form degree ceiling")->envname("SBC_MAX_DEGREE");
  auto* o_unc = app.add_flag("--uncoupled", uncoupled, "use the uncoupled field")->envname("SBC_UNCOUPLED");
  auto* o_ext = app.add_flag("--extended-precision", extended, "long double integration")
                    ->envname("SBC_EXTENDED_PRECISION");
  app.add_flag("--ratio-check", flags.ratio_check, "print the dh1/dh2 table")->envname("SBC_RATIO_CHECK");

  auto* constants = app.add_subcommand("constants", "derived mass constants as JSON");
  auto* normalform = app.add_subcommand("normalform", "normal form, printed polynomials, certificate");
  auto* blockmap = app.add_subcommand("blockmap", "numerical block-map sweep and fits");
  auto* verify = app.add_subcommand("verify", "the invariant battery");
  verify->add_flag("--list", flags.list, "list checks and faults");
  verify->add_option("--fault", flags.faults, "inject a named fault (repeatable)");
  verify->add_option("--check", flags.checks, "run only this check (repeatable)");
  auto* simulate = app.add_subcommand("simulate", "dump one passage trajectory");
  simulate->add_option("--offset", flags.offset, "kappa~ offset of the entry state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage_error", e.what(), 2);
  }

  try {
    // defaults < config file < SBC_* environment < flags; CLI11 fills the
    // option from the environment when the flag is absent
    ExperimentConfig cfg;
    if (o_config->count()) cfg = load_config(config_path);
    if (o_out->count()) cfg.outputs = out;
    if (o_workers->count()) cfg.workers = workers;
    if (o_seed->count()) cfg.seed = seed;
    if (o_deg->count()) cfg.max_degree = max_degree;
    if (o_unc->count()) cfg.uncoupled = uncoupled;
    if (o_ext->count()) cfg.extended_precision = extended;
    cfg.validate();

    Failure f;
    if (*constants) f = cmd_constants(cfg, flags, std::cout);
    else if (*normalform) f = cmd_normalform(cfg, flags, std::cout);
    else if (*blockmap) f = cmd_blockmap(cfg, flags, std::cout);
    else if (*verify) f = cmd_verify(cfg, flags, std::cout);
    else if (*simulate) f = cmd_simulate(cfg, flags, std::cout);
    if (!f.error_class.empty()) return report(f.error_class, f.message, 1);
    return 0;
  } catch (const sbc::ConfigError& e) {
    return report(e.error_class(), e.what(), 2);
  } catch (const sbc::Error& e) {
    return report(e.error_class(), e.what(), 3);
  } catch (const std::exception& e) {
    return report("runtime_error", e.what(), 4);
  }
}
