#pragma once

#include <stdexcept>
#include <string>

namespace dsd {

/// Argument outside an operation's domain (bad t, invalid interval, size mismatch, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The design does not determine a unique solution for the requested closed form.
class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Response with zero Mallows dispersion about its symbolic mean.
class DegenerateResponseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordinary least squares on a rank-deficient design.
class SingularFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (table, model or config).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsd
