#pragma once

#include <stdexcept>
#include <string>

namespace colombeau {

// Base for every error raised by the library. Each subtype maps onto one
// failure class so callers (the CLI in particular) can pick an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested ε is not a point of the net's grid, or two grids disagree.
class GridError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between a point, a field, or a kernel.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A derivative order, node count or expansion length beyond what is supported.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (γ <= 0, s < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A field produced a non-finite value where a finite one was required.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Work estimate exceeds the configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario, catalog entry or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace colombeau
