#pragma once

#include <stdexcept>
#include <string>

namespace flab {

// Invalid parameters, widths or pairings. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A request that would exceed the desk-scale table or qubit caps (exit code 3).
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// Raised when an internal invariant breaks, e.g. a zero-norm collapse.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace flab
