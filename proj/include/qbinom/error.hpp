#pragma once

#include <stdexcept>
#include <string>

namespace qbinom {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotDensityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotOnCircleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class ImpossibleEventError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbinom
