#pragma once

#include <stdexcept>
#include <string>

namespace bautin {

// Violated precondition or parameter outside the operating window.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration failed to converge, a linear solve was singular, or a
// consistency check inside the cascade did not hold.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bautin
