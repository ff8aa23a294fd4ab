#pragma once

#include <stdexcept>

namespace t2t {

/// Bad or inconsistent configuration. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A produced schedule broke a problem constraint.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace t2t
