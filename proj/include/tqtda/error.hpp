#pragma once

#include <stdexcept>
#include <string>

namespace tqtda {

/// Bad user input: malformed files, out-of-range parameters. Maps to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// An eigensolver or other numerical routine failed. Maps to exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// A quantity is undefined for this input (all-zero spectrum, too few points to fit).
class Undefined : public std::domain_error {
 public:
  explicit Undefined(const std::string& what) : std::domain_error(what) {}
};

}  // namespace tqtda
