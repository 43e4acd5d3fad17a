#pragma once

#include <stdexcept>
#include <string>

namespace shearlab {

/// Malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state or step-size collapse during time stepping.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured hard limit (window size, path count) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to meet its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form bound was requested outside the parameter range where it is meaningful.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The parameters do not lie in the regime an operation asserts on.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shearlab
