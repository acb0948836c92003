#pragma once

#include <stdexcept>
#include <string>

namespace setavg {

// Every failure raised by the library derives from Error. The C API maps each
// subclass onto a status code, the CLI maps status codes onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands do not share width, height, cell size and origin.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// An extrapolated set wants to grow past the grid border.
class ClippingError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class NotNestedError : public Error {
 public:
  using Error::Error;
};

class NotSimplyDifferentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace setavg
