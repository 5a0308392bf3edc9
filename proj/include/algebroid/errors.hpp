#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace algebroid {

/// Root of every exception thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error("parse error at byte " + std::to_string(offset) + ": " + msg), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UndeclaredVariable : public Error {
 public:
  explicit UndeclaredVariable(const std::string& token)
      : Error("undeclared variable '" + token + "'"), token_(token) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class HolomorphyViolation : public Error {
 public:
  explicit HolomorphyViolation(const std::string& token)
      : Error("conjugate variable '" + token + "' in a holomorphic context"), token_(token) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Division by zero, log(0), sqrt(0). Carries the printed offending subexpression.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, const std::string& subexpr)
      : Error(what + " in '" + subexpr + "'"), subexpr_(subexpr) {}
  const std::string& subexpression() const noexcept { return subexpr_; }

 private:
  std::string subexpr_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public SingularMatrix {
 public:
  using SingularMatrix::SingularMatrix;
};

class SingularJacobian : public SingularMatrix {
 public:
  using SingularMatrix::SingularMatrix;
};

class SingularAnchor : public SingularMatrix {
 public:
  using SingularMatrix::SingularMatrix;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Input the engine understands but cannot process (indefinite metric, missing chart data).
class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

class RealityCheckFailed : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace algebroid
