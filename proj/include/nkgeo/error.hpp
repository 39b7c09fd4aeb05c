#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nkgeo {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class UnboundVariable : public Error {
public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

/// Division by zero, ln(0) or a non-finite intermediate. Carries the offending subtree.
class SingularEvaluation : public Error {
public:
  SingularEvaluation(const std::string& reason, const std::string& subtree)
      : Error(reason + " in '" + subtree + "'"), subtree_(subtree) {}
  const std::string& subtree() const noexcept { return subtree_; }

private:
  std::string subtree_;
};

/// Every sampled point was singular or rejected by the caller's regularity predicate.
class SamplingExhausted : public Error {
public:
  using Error::Error;
};

/// Symbolic expansion exceeded its term budget.
class ExpansionLimit : public Error {
public:
  using Error::Error;
};

/// A precondition on the arguments of an operation does not hold.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Numerical integration failed (blow-up guard, step-size underflow).
class IntegrationFailure : public Error {
public:
  IntegrationFailure(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const noexcept { return t_; }

private:
  double t_;
};

}  // namespace nkgeo
