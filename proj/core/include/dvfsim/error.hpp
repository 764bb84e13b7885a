#ifndef DVFSIM_ERROR_HPP
#define DVFSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dvfsim {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A voltage or frequency outside the scaling domain.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Power/performance anchors that cannot be turned into a valid profile.
class CalibrationError : public Error {
  public:
    using Error::Error;
};

/// A field value that violates a type invariant. Carries the field name.
class ValidationError : public Error {
  public:
    ValidationError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// A deadline tighter than the fastest possible execution.
class InfeasibleDeadlineError : public Error {
  public:
    using Error::Error;
};

/// More CPU-GPU pairs requested than the cluster has.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// A malformed record in a task-set or library file. Carries the line number.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, long line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    long line() const { return line_; }

  private:
    long line_;
};

/// An internal consistency failure, e.g. a scheduler placing a task past its
/// deadline. Must never surface from a correct run.
class InternalError : public Error {
  public:
    using Error::Error;
};

} // namespace dvfsim

#endif
