#pragma once

#include <stdexcept>
#include <string>

namespace pairproj {

/// Error categories mapped by the CLI onto process exit codes.
enum class ErrorKind {
  validation,   // bad numeric input (non-normalized state, out-of-range value)
  domain,       // argument outside a formula's mathematical domain
  config,       // inconsistent configuration (e.g. mode map missing a mode)
  range,        // physical parameter outside an achievable range
  schema,       // malformed or incomplete input file
  parse,        // unparseable token
  convergence,  // iterative solver did not converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pairproj
