#pragma once

#include <stdexcept>
#include <string>

namespace crgn {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// --- finite field / matrix ---

class NotPrimeError : public Error {
  public:
    using Error::Error;
};

class DivisionByZeroError : public Error {
  public:
    using Error::Error;
};

/// Mixing elements or matrices from different fields.
class FieldMismatchError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

class SingularMatrixError : public Error {
  public:
    using Error::Error;
};

class DuplicatePointError : public Error {
  public:
    using Error::Error;
};

class CollidingPointsError : public Error {
  public:
    using Error::Error;
};

/// Exhaustive submatrix enumeration refused above the configured size cap.
class SizeCapError : public Error {
  public:
    using Error::Error;
};

// --- tradeoff ---

class InvalidParamsError : public Error {
  public:
    using Error::Error;
};

// --- code builders ---

class ParamsOutOfRangeError : public Error {
  public:
    using Error::Error;
};

class FieldTooSmallError : public Error {
  public:
    using Error::Error;
};

class ConditionsFailedError : public Error {
  public:
    using Error::Error;
};

class NotSuperRegularError : public Error {
  public:
    using Error::Error;
};

class SingularUError : public Error {
  public:
    using Error::Error;
};

class BadScalarsError : public Error {
  public:
    using Error::Error;
};

// --- encode / repair / decode ---

class WrongLengthError : public Error {
  public:
    using Error::Error;
};

class InconsistentShardError : public Error {
  public:
    using Error::Error;
};

class BadHelperSetError : public Error {
  public:
    using Error::Error;
};

class BadFailureSetError : public Error {
  public:
    using Error::Error;
};

class TooManyFailuresError : public Error {
  public:
    using Error::Error;
};

class MixedFailureUnsupportedError : public Error {
  public:
    using Error::Error;
};

class NotEnoughShardsError : public Error {
  public:
    using Error::Error;
};

class DuplicateShardError : public Error {
  public:
    using Error::Error;
};

// --- file I/O ---

class IoError : public Error {
  public:
    using Error::Error;
};

class FormatError : public Error {
  public:
    using Error::Error;
};

} // namespace crgn
