#pragma once

#include <stdexcept>
#include <string>

namespace pnpfv {

/// Invalid or inconsistent problem setup (bad sizes, missing fields, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data outside the domain an operation is defined on (negative densities, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values large enough that exp() would overflow.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pnpfv
