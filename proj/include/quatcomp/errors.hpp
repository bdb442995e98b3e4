#pragma once

#include <stdexcept>
#include <string>

namespace quatcomp {

/// Shapes of two operands do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A pure (zero real part) quaternion or matrix was required.
class PurityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A complex matrix is not the adjoint of any quaternion matrix.
class RepresentationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Without-replacement sampling asked for more positions than exist.
class CapacityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConstructibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observations cannot be met by any feasible matrix.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unreadable, unwritable or malformed file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; the message starts with the field path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace quatcomp
