#pragma once

#include <stdexcept>
#include <string>

namespace sbc {

// Every failure carries a short machine-readable class name; the CLI prints it
// verbatim as the first token of its one-line error message.
class Error : public std::runtime_error {
 public:
  Error(std::string cls, const std::string& what)
      : std::runtime_error(what), cls_(std::move(cls)) {}
  const std::string& error_class() const { return cls_; }

 private:
  std::string cls_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain_error", w) {}
};
struct SingularError : Error {
  explicit SingularError(const std::string& w) : Error("singular_configuration", w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error("precondition_error", w) {}
};
struct InvariantError : Error {
  explicit InvariantError(const std::string& w) : Error("internal_invariant", w) {}
};
struct IntegrationError : Error {
  explicit IntegrationError(const std::string& w) : Error("integration_error", w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config_error", w) {}
};

}  // namespace sbc
