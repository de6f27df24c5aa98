#pragma once

#include <stdexcept>
#include <string>

namespace etlab {

// Vectors or matrices of incompatible sizes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter outside the documented range (k < 2, composite where a prime is
// required, out-of-range residue, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A dense realization or explicit enumeration would exceed the configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A witness matrix does not satisfy the hypothesis of the bound it is fed to.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative numeric routine did not converge within its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A construction has no solution for the requested parameters.
class ConstructionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace etlab
