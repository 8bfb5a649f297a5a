#pragma once

#include <stdexcept>
#include <string>

namespace scole {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A factorization or eigensolver failed, or a system was numerically singular.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The shift i*s hit the spectrum of the operator being inverted.
class SpectrumHit : public NumericalError {
 public:
  SpectrumHit(double s, const std::string& what)
      : NumericalError(what), s_(s) {}

  double frequency() const noexcept { return s_; }

 private:
  double s_;
};

}  // namespace scole
