#pragma once

#include <stdexcept>
#include <string>

namespace netcent {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed edge list or graph6 input.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Violated precondition: asymmetric matrix, bad dimensions, bad parameter.
class ContractError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraphError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Connected-sample retry budget exhausted.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace netcent
