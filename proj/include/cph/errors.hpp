#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace cph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function value is unbounded at (or numerically near) the requested point.
/// `location()` carries the estimated singular time when one is known.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what,
                     std::optional<std::complex<double>> location = std::nullopt)
      : Error(what), location_(location) {}

  const std::optional<std::complex<double>>& location() const noexcept { return location_; }

 private:
  std::optional<std::complex<double>> location_;
};

/// The default integration path of an elliptic integral passes through a
/// branch point of the integrand.
class SingularPathError : public Error {
 public:
  using Error::Error;
};

/// A point lies on the excluded cone u^2 + v^2 = 0, or a scalar is not finite.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class NullVelocityComponentError : public Error {
 public:
  using Error::Error;
};

class BothComponentsZeroError : public Error {
 public:
  using Error::Error;
};

class DegenerateGermError : public Error {
 public:
  using Error::Error;
};

class ClassificationMismatchError : public Error {
 public:
  using Error::Error;
};

class DegenerateCoefficientsError : public Error {
 public:
  using Error::Error;
};

/// The log chart (omega, eta) = (log u, log v) breaks down on the requested
/// evaluation path: u or v vanishes or blows up there.
class ChartDegeneracyError : public Error {
 public:
  explicit ChartDegeneracyError(const std::string& what,
                                std::optional<std::complex<double>> location = std::nullopt)
      : Error(what), location_(location) {}

  const std::optional<std::complex<double>>& location() const noexcept { return location_; }

 private:
  std::optional<std::complex<double>> location_;
};

}  // namespace cph
