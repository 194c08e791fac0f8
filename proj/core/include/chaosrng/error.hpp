#pragma once

#include <stdexcept>
#include <string>

namespace chaosrng {

// Every library failure derives from Error so callers can map the category
// to a process exit code without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coordinate outside (0,1) or exactly on a breakpoint.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double coordinate)
      : Error(what), coordinate_(coordinate) {}
  double coordinate() const noexcept { return coordinate_; }

 private:
  double coordinate_;
};

// Invalid parameters or malformed input (bad map definition, unnormalized
// density, dimension mismatch, empty typical set, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed to converge.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// Input stream too short for the requested statistic.
class InsufficientDataError : public Error {
 public:
  InsufficientDataError(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

// Request would exceed a configured size cap (e.g. refinement depth).
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaosrng
