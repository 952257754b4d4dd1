#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace segconv {

/// Invalid configuration or mismatched inputs (CLI exit code 1).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, overflow guard, bad contour (CLI exit code 2).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside [0,b]; indicates a caller bug, never expected in-algorithm.
class DomainError : public std::invalid_argument {
  public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Resolvent requested at (or numerically indistinguishable from) a spectrum point.
class SingularResolvent : public NumericalError {
  public:
    SingularResolvent(const std::string& what, std::optional<std::complex<double>> nearest)
        : NumericalError(what), nearest_eigenvalue(nearest) {}
    std::optional<std::complex<double>> nearest_eigenvalue;
};

/// A contour passed too close to a zero, or the winding count did not settle.
class ContourError : public NumericalError {
  public:
    explicit ContourError(const std::string& what) : NumericalError(what) {}
};

}  // namespace segconv
