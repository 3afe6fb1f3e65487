#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace actitrait {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file content. `line()` is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A value violates a domain invariant (score range, duplicate id, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller-side precondition was not met (too few rows, dimension mismatch).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace actitrait
