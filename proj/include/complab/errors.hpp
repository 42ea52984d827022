#pragma once

#include <stdexcept>
#include <string>

namespace complab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. a radius
/// beyond the conjugate radius of a positively curved space form).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested radius cannot be matched: the target integral exceeds
/// what the comparison side can attain.
class InfeasibleRadius : public Error {
 public:
  using Error::Error;
};

/// A caller-declared hypothesis was refuted by the numerical data.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// An equation has no solution inside the scanned range.
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (model parameters, CLI flags, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing or unreadable input/output file.
class FileError : public Error {
 public:
  using Error::Error;
};

}  // namespace complab
