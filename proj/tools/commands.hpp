#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace sbc::cli {

struct Flags {
  bool ratio_check = false;
  bool list = false;
  std::vector<std::string> faults, checks;
  double offset = 0;  // simulate; 0: use the config value
};

// A command outcome that is not an exception but still a failure (failed
// certificate, exponent outside the band, ...).
struct Failure {
  std::string error_class, message;
};

// Each returns an empty error_class on success.
Failure cmd_constants(const ExperimentConfig& c, const Flags& f, std::ostream& out);
Failure cmd_normalform(const ExperimentConfig& c, const Flags& f, std::ostream& out);
Failure cmd_blockmap(const ExperimentConfig& c, const Flags& f, std::ostream& out);
Failure cmd_verify(const ExperimentConfig& c, const Flags& f, std::ostream& out);
Failure cmd_simulate(const ExperimentConfig& c, const Flags& f, std::ostream& out);

std::string one_line(const std::string& s);

}  // namespace sbc::cli
