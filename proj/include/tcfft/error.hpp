#pragma once

#include <stdexcept>
#include <string>

namespace tcfft {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Size is not a supported power of two.
class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Violated API contract (wrong fragment kind, inconsistent map, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ProbeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcfft
