#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartalg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error("syntax error at position " + std::to_string(pos) + ": " + msg), position(pos) {}
  std::size_t position;
};

class UnknownIdentifierError : public Error {
public:
  explicit UnknownIdentifierError(std::string name)
      : Error("unknown identifier '" + name + "'"), identifier(std::move(name)) {}
  std::string identifier;
};

/// Division by zero, log or sqrt of a non-positive value, or a non-finite result.
class DomainError : public Error {
public:
  DomainError(const std::string& what, std::string subexpr)
      : Error("domain violation (" + what + ") in " + subexpr), subexpression(std::move(subexpr)) {}
  std::string subexpression;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class ChartMismatchError : public Error {
public:
  ChartMismatchError() : Error("objects live on different charts") {}
};

/// Input that violates an operation's precondition (not an algebroid, singular frame, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A rejected input together with the sample point that shows why.
class WitnessError : public PreconditionError {
public:
  WitnessError(const std::string& msg, std::vector<int> idx, std::vector<double> pt, double val)
      : PreconditionError(msg + " at " + describe(idx, pt)), indices(std::move(idx)), point(std::move(pt)), value(val) {}
  std::vector<int> indices;
  std::vector<double> point;
  double value;

private:
  static std::string describe(const std::vector<int>& idx, const std::vector<double>& pt) {
    std::string s = "indices (";
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k]);
    s += ") point (";
    for (std::size_t k = 0; k < pt.size(); ++k) s += (k ? ", " : "") + std::to_string(pt[k]);
    return s + ")";
  }
};

/// Every sample point hit a domain violation.
class UndecidableError : public Error {
public:
  using Error::Error;
};

/// Two independent routes disagreed; this is an implementation bug.
class InternalConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace cartalg
