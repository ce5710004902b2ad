#pragma once

#include <stdexcept>
#include <string>

namespace tumorsim {

/// Base of every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of the singular potential.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

class IncompatibleRHS : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

/// A Newton iterate could not be damped back into the potential domain.
class DomainEscape : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  CflViolation(const std::string& what, double admissible_dt)
      : Error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class PicardStall : public Error {
 public:
  using Error::Error;
};

class ConvexityViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace tumorsim
