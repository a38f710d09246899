#pragma once

#include <stdexcept>
#include <string>

namespace rydlink {

// Configuration and input problems. CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class ParseError : public ValidationError {
public:
  explicit ParseError(const std::string& what) : ValidationError(what) {}
};

class UnknownKey : public ValidationError {
public:
  explicit UnknownKey(const std::string& what) : ValidationError(what) {}
};

// Numerical failures. CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class SingularSystem : public NumericalError {
public:
  explicit SingularSystem(const std::string& what) : NumericalError(what) {}
};

class DegenerateDenominator : public NumericalError {
public:
  explicit DegenerateDenominator(const std::string& what) : NumericalError(what) {}
};

class QuadratureNotConverged : public NumericalError {
public:
  explicit QuadratureNotConverged(const std::string& what) : NumericalError(what) {}
};

class GridTooCoarse : public NumericalError {
public:
  explicit GridTooCoarse(const std::string& what) : NumericalError(what) {}
};

class NonIntegerPeriods : public NumericalError {
public:
  explicit NonIntegerPeriods(const std::string& what) : NumericalError(what) {}
};

class UnsupportedOrder : public ValidationError {
public:
  explicit UnsupportedOrder(const std::string& what) : ValidationError(what) {}
};

class ZeroInput : public ValidationError {
public:
  explicit ZeroInput(const std::string& what) : ValidationError(what) {}
};

// Filesystem problems. CLI maps these to exit code 4.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rydlink
