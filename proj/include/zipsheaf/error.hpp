#pragma once

#include <stdexcept>
#include <string>

namespace zipsheaf {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The configuration is valid in principle but lies outside what is implemented.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A brute-force enumeration would exceed its candidate budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace zipsheaf
