#pragma once

#include <stdexcept>
#include <string>

namespace simt {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (corpus lines, alignment tokens, program strings).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss or parameter.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace simt
