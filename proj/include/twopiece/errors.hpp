#pragma once

#include <stdexcept>
#include <string>

namespace twopiece {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its requested accuracy.
/// `achieved()` carries the best error estimate that was reached.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A root search found no sign change, or the bracket scan was too coarse.
class RootError : public Error {
 public:
  using Error::Error;
};

}  // namespace twopiece
