#pragma once

#include <stdexcept>
#include <string>

namespace basilica {

/// Base class for all library errors. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: out-of-range parameter, malformed address, invalid scheme. Exit code 1.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Request exceeds a configured size budget. Exit code 2.
class CapacityError : public Error {
public:
  explicit CapacityError(const std::string& what) : Error(what) {}
};

/// A numeric factorization hit a (near-)singular block.
class SingularMatrixError : public Error {
public:
  explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

/// A structural invariant failed at runtime. Exit code 3.
class InvariantError : public Error {
public:
  explicit InvariantError(const std::string& what) : Error(what) {}
};

} // namespace basilica
