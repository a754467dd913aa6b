#pragma once

#include <stdexcept>
#include <string>

namespace redmap {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class IncompleteKraus : public Error {
 public:
  using Error::Error;
};

/// The first leg of a dynamical map is not invertible (condition number above the limit).
class SingularMap : public Error {
 public:
  using Error::Error;
};

class MaximallyEntangled : public Error {
 public:
  using Error::Error;
};

class NotLocalUnitary : public Error {
 public:
  using Error::Error;
};

/// The dilation inverse applied to a joint state did not yield a product state.
class NotPreInitialProduct : public Error {
 public:
  using Error::Error;
};

class UnknownGate : public Error {
 public:
  using Error::Error;
};

class NoConventionFits : public Error {
 public:
  using Error::Error;
};

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace redmap
