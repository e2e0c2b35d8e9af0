#pragma once

#include <stdexcept>
#include <string>

namespace genland {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands, or a size below the model minimum.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input expected to be Hermitian (or PSD) is not, beyond tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Quantity undefined for the input (all-zero weights, zero variance, empty set).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract was violated (e.g. non-unitary monodromy).
class AccuracyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace genland
