#pragma once

#include <stdexcept>
#include <string>

namespace ewens {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument values (nonpositive theta, bad case label, ...).
class domain_error : public error {
 public:
  using error::error;
};

/// A configured size limit would be exceeded (e.g. exact-path table sizes).
class resource_limit_error : public error {
 public:
  using error::error;
};

/// Mismatched sizes between arguments (n beyond a table's range).
class dimension_error : public error {
 public:
  using error::error;
};

/// A closed form was requested where its applicability condition fails.
class condition_error : public error {
 public:
  using error::error;
};

/// Standardization with zero variance (n = 1).
class degenerate_error : public error {
 public:
  using error::error;
};

}  // namespace ewens
