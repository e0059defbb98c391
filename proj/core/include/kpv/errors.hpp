#pragma once

#include <stdexcept>
#include <string>

namespace kpv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero denominator in a Rational, a Jet2 quotient or an Expression quotient.
/// `where()` names the offending subexpression when one is known.
class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(std::string where = {})
      : Error(where.empty() ? "division by zero" : "division by zero in " + where),
        where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class UnboundSymbol : public Error {
 public:
  explicit UnboundSymbol(const std::string& name)
      : Error("unbound symbol '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Arithmetic between an exact and a floating Scalar.
class ModeMismatch : public Error {
 public:
  ModeMismatch() : Error("mixed rational/float arithmetic") {}
};

/// A vector field evaluated on one of its catalogued singular loci.
class SingularLocus : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownId : public Error {
 public:
  explicit UnknownId(const std::string& what) : Error("unknown id: " + what) {}
};

}  // namespace kpv
