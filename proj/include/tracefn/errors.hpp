#pragma once

#include <stdexcept>
#include <string>

namespace tracefn {

/// Raised when a mathematical precondition is violated (bad modulus, singular
/// matrix, non-Fourier kernel, ...). The CLI maps it to exit code 1.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised for configuration, parsing and file I/O problems (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tracefn
