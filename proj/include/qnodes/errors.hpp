#pragma once

#include <stdexcept>
#include <string>

namespace qnodes {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantum number, coordinate or physical parameter outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A state whose norm deviates from one beyond the allowed tolerance.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Grid shape unsuitable for the requested operation (point parity,
/// topology, resolution).
class GridError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Sampled function is numerically zero over most of its support.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Invalid sweep / CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qnodes
