#pragma once

#include <stdexcept>
#include <string>

namespace ssb {

/// Invalid or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical tolerance could not be met (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phase-space or position grid too narrow / too coarse for the state.
class GridError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Split-step wavefunction reached the periodic boundary.
class AliasingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Adaptive integrator could not meet its local-error tolerance.
class OdeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail

}  // namespace ssb
