#pragma once

#include <stdexcept>
#include <string>

namespace chaos {

// Bad shapes, indices, or values in caller input.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A documented size or work limit was exceeded (entry caps, enumeration budgets).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chaos
