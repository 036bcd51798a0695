#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlbase {

/// Base class of every error thrown by this library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& message) : std::runtime_error(message) {}
};

/// Malformed input document; carries the 1-based line number.
class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& message)
      : error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structurally valid input whose declarations do not fit together,
/// e.g. an XML label name that is missing from the ARFF attributes.
class schema_error : public error {
 public:
  using error::error;
};

/// A well-formed token whose value is outside its attribute's domain.
class value_error : public error {
 public:
  using error::error;
  value_error(std::size_t line, const std::string& message)
      : error("line " + std::to_string(line) + ": " + message) {}
};

/// Invalid argument to an operation (empty sequence, degenerate split, ...).
class argument_error : public error {
 public:
  using error::error;
};

}  // namespace mlbase
