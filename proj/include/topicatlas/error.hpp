#pragma once

#include <stdexcept>
#include <string>

namespace topicatlas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record or file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates a structural contract (duplicate ids, empty vocabulary, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf or a degenerate normalization inside the numerical core.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace topicatlas
