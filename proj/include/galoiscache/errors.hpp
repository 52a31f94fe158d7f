#pragma once

#include <stdexcept>
#include <string>

namespace galoiscache {

// Argument outside the valid range of a field, cache or scenario.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InversionOfZero : public DomainError {
 public:
  InversionOfZero() : DomainError("multiplicative inverse of zero is undefined") {}
};

// Field type the requested operation cannot work with (e.g. GF(p^n), p>2, n>1).
class UnsupportedField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoUniqueIntersection : public DomainError {
 public:
  using DomainError::DomainError;
};

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace galoiscache
