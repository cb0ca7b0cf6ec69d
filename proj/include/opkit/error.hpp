#pragma once

#include <stdexcept>
#include <string>

namespace opkit {

// Bad user input: malformed data, window overflow, inconsistent fields.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An algebraic axiom failed on data the engine constructed or was handed
// (d^2 != 0, non-equivariant module, inconsistent relations, ...).
class AxiomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opkit
