#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace routepred {

// Base of every error the library throws. The CLI maps the concrete
// subclasses onto its exit-code contract (1 I/O, 2 usage/config, 3 data).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value violated its invariant. `field()` names it.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input data is unusable for the requested operation (single class,
// too few vehicles, empty test set, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `location()` is a 1-based line number for text
// formats or a 0-based byte offset for XML; see the throwing function.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t location)
      : DataError(what), location_(location) {}
  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedKernel : public Error {
 public:
  using Error::Error;
};

class ZeroNorm : public Error {
 public:
  using Error::Error;
};

}  // namespace routepred
